#include "gridsim/engine.hpp"

#include <algorithm>
#include <set>

#include "gridsim/tasks.hpp"

namespace gridsim {

namespace {

// At most one marker per cell; a repeated clear on the same cell renews it.
void place_marker(WorldState& world, Position pos, int expiry) {
    for (ClearMarker& m : world.markers) {
        if (m.pos == pos) {
            m.expiry = expiry;
            return;
        }
    }
    world.markers.push_back({pos, expiry});
}

// Starts an agent's downtime, severs all its attachments and frees any
// subtree that loses its last agent. Disabling also wipes the clear charge.
void disable_agent(WorldState& world, int id, int step) {
    Thing& victim = world.thing(id);
    victim.disabled_until = step + world.config.disable_duration;
    victim.charge_count = 0;
    std::set<int> candidates;
    for (int n : world.attachments.neighbors(id)) candidates.insert(n);
    world.attachments.remove_node(id);
    prune_orphan_components(world, candidates);
}

void remove_block(WorldState& world, int id) {
    std::set<int> candidates;
    for (int n : world.attachments.neighbors(id)) candidates.insert(n);
    world.remove_thing(id);
    prune_orphan_components(world, candidates);
}

// Applies a fully charged clear to one cell: a block vanishes, an agent is
// disabled, an interior obstacle reverts to empty terrain. The border ring
// is permanent.
void clear_cell(WorldState& world, Position pos, int step) {
    if (const Thing* hit = world.thing_at(pos)) {
        if (hit->is_agent()) {
            disable_agent(world, hit->id, step);
        } else {
            remove_block(world, hit->id);
        }
    } else if (world.terrain_at(pos) == Terrain::Obstacle && !world.on_border(pos)) {
        world.set_terrain(pos, Terrain::Empty);
    }
}

Outcome resolve_move(WorldState& world, int id, Direction dir) {
    MoveResult r = translate_component(world, world.attachments.component_of(id), dir);
    return r.ok ? Outcome::Success : Outcome::FailedPath;
}

Outcome resolve_rotate(WorldState& world, int id, Rotation rot) {
    return rotate_component(world, id, rot).ok ? Outcome::Success : Outcome::FailedBlocked;
}

Outcome resolve_attach(WorldState& world, int id, Direction dir) {
    const Thing& agent = world.thing(id);
    const Thing* target = world.thing_at(agent.pos + offset_of(dir));
    if (!target || target->kind != ThingKind::Block) return Outcome::FailedTarget;
    std::set<int> mine = world.attachments.component_of(id);
    if (mine.count(target->id)) return Outcome::FailedTarget;
    std::set<int> theirs = world.attachments.component_of(target->id);
    if (static_cast<int>(mine.size() + theirs.size()) > world.config.max_component_size) {
        return Outcome::FailedResources;
    }
    world.attachments.add_edge(id, target->id);
    return Outcome::Success;
}

Outcome resolve_detach(WorldState& world, int id, Direction dir) {
    const Thing& agent = world.thing(id);
    const Thing* target = world.thing_at(agent.pos + offset_of(dir));
    if (!target || !world.attachments.has_edge(id, target->id)) return Outcome::FailedTarget;
    world.attachments.remove_edge(id, target->id);
    prune_orphan_components(world, {target->id});
    return Outcome::Success;
}

Outcome resolve_disconnect(WorldState& world, int id, Position p1, Position p2) {
    if (p1 == p2) return Outcome::FailedParameter;
    const Thing& agent = world.thing(id);
    const Thing* a = world.thing_at(agent.pos + p1);
    const Thing* b = world.thing_at(agent.pos + p2);
    if (!a || !b || a->kind != ThingKind::Block || b->kind != ThingKind::Block) {
        return Outcome::FailedTarget;
    }
    if (!world.attachments.has_edge(a->id, b->id)) return Outcome::FailedTarget;
    if (!world.attachments.component_of(id).count(a->id)) return Outcome::FailedTarget;
    world.attachments.remove_edge(a->id, b->id);
    prune_orphan_components(world, {a->id, b->id});
    return Outcome::Success;
}

Outcome resolve_request(WorldState& world, int id, Direction dir) {
    const Thing& agent = world.thing(id);
    Position target = agent.pos + offset_of(dir);
    const Dispenser* d = world.dispenser_at(target);
    if (!d) return Outcome::FailedTarget;
    if (world.thing_at(target)) return Outcome::FailedBlocked;
    Thing block;
    block.kind = ThingKind::Block;
    block.pos = target;
    block.block_type = d->block_type;
    world.add_thing(std::move(block));
    return Outcome::Success;
}

Outcome resolve_clear(WorldState& world, int id, Position rel, int step) {
    Thing& agent = world.thing(id);
    Position target = agent.pos + rel;
    if (rel.manhattan() > world.config.vision_range || !world.in_bounds(target)) {
        return Outcome::FailedTarget;
    }
    if (agent.charge_count > 0 && agent.charge_target == target) {
        ++agent.charge_count;
    } else {
        agent.charge_target = target;
        agent.charge_count = 1;
    }
    place_marker(world, target, step + 1);
    if (agent.charge_count >= world.config.clear_charge) {
        clear_cell(world, target, step);
        world.thing(id).charge_count = 0;
    }
    return Outcome::Success;
}

// Everything except connect, which needs its partner's slot and resolves in
// the step loop.
Outcome resolve_single(WorldState& world, int id, const Action& a, int step) {
    if (a.kind == ActionKind::NoOp) return Outcome::NoOp;
    if (a.kind == ActionKind::Skip) return Outcome::Success;
    if (world.thing(id).disabled_until >= step) return Outcome::FailedStatus;
    switch (a.kind) {
        case ActionKind::Move: return resolve_move(world, id, a.dir);
        case ActionKind::Rotate: return resolve_rotate(world, id, a.rot);
        case ActionKind::Attach: return resolve_attach(world, id, a.dir);
        case ActionKind::Detach: return resolve_detach(world, id, a.dir);
        case ActionKind::Disconnect: return resolve_disconnect(world, id, a.p1, a.p2);
        case ActionKind::Request: return resolve_request(world, id, a.dir);
        case ActionKind::Clear: return resolve_clear(world, id, a.p1, step);
        case ActionKind::Submit: return check_submission(world, id, a.task).outcome;
        default: return Outcome::FailedParameter;
    }
}

// Resolves a connect at the earlier partner's slot. A mutual pair gets one
// atomic outcome for both agents; anything one-sided fails alone.
template <typename ActionOf>
void resolve_connect_slot(WorldState& world, int a_id, const Action& a_action,
                          ActionOf&& action_of, std::map<int, Outcome>& outcomes, int step) {
    const Thing& a = world.thing(a_id);
    if (a_action.partner == a.name) {
        outcomes[a_id] = Outcome::FailedParameter;
        return;
    }
    int b_id = world.agent_id(a_action.partner);
    if (b_id < 0) {
        outcomes[a_id] = Outcome::FailedPartner;
        return;
    }
    Action b_action = action_of(b_id);
    bool mutual = b_action.kind == ActionKind::Connect && b_action.partner == a.name &&
                  !outcomes.count(b_id);
    if (!mutual) {
        outcomes[a_id] = Outcome::FailedPartner;
        return;
    }

    const Thing& b = world.thing(b_id);
    bool a_disabled = a.disabled_until >= step;
    bool b_disabled = b.disabled_until >= step;
    if (a_disabled || b_disabled) {
        outcomes[a_id] = a_disabled ? Outcome::FailedStatus : Outcome::FailedPartner;
        outcomes[b_id] = b_disabled ? Outcome::FailedStatus : Outcome::FailedPartner;
        return;
    }
    if (a.team != b.team) {
        outcomes[a_id] = outcomes[b_id] = Outcome::FailedPartner;
        return;
    }

    const Thing* block_a = world.thing_at(a.pos + a_action.p1);
    const Thing* block_b = world.thing_at(b.pos + b_action.p1);
    std::set<int> comp_a = world.attachments.component_of(a_id);
    std::set<int> comp_b = world.attachments.component_of(b_id);
    Outcome o = Outcome::Success;
    if (!block_a || block_a->kind != ThingKind::Block || !comp_a.count(block_a->id) ||
        !block_b || block_b->kind != ThingKind::Block || !comp_b.count(block_b->id)) {
        o = Outcome::FailedTarget;
    } else if (manhattan(block_a->pos, block_b->pos) != 1) {
        o = Outcome::FailedTarget;
    } else if (comp_a.count(block_b->id)) {
        o = Outcome::FailedTarget;  // already one component; no cycles
    }
    if (o == Outcome::Success) world.attachments.add_edge(block_a->id, block_b->id);
    outcomes[a_id] = outcomes[b_id] = o;
}

}  // namespace

StepOutput step(WorldState& world, const std::map<int, Action>& actions) {
    const SimConfig& cfg = world.config;
    int t = world.step + 1;

    std::erase_if(world.markers, [&](const ClearMarker& m) { return m.expiry <= t; });
    std::erase_if(world.tasks, [&](const Task& task) { return task.deadline < t; });

    std::vector<int> order = world.agent_ids();
    world.rng.shuffle(order);

    auto action_of = [&](int id) {
        auto it = actions.find(id);
        return it == actions.end() ? Action::no_op() : it->second;
    };

    std::map<int, Outcome> outcomes;
    for (int id : order) {
        if (outcomes.count(id)) continue;
        Action a = action_of(id);
        if (a.kind == ActionKind::Connect) {
            resolve_connect_slot(world, id, a, action_of, outcomes, t);
        } else {
            outcomes[id] = resolve_single(world, id, a, t);
        }
    }

    StepOutput out;
    if (world.rng.chance(cfg.clear_event_probability)) out.events.push_back(apply_clear_event(world));
    if (static_cast<int>(world.tasks.size()) < cfg.task_cap &&
        world.rng.chance(cfg.task_spawn_probability)) {
        world.tasks.push_back(generate_task(world.rng, cfg, t, world.next_task_id++));
    }

    world.step = t;

    for (int id : world.agent_ids()) {
        ActionRecord rec{action_of(id), outcomes.at(id)};
        world.thing(id).last_action = rec;
        out.results.push_back({id, rec.action, rec.outcome});
    }
    return out;
}

ClearEvent apply_clear_event(WorldState& world) {
    const SimConfig& cfg = world.config;
    int t = world.step + 1;
    Position center{world.rng.uniform_int(1, cfg.width - 2),
                    world.rng.uniform_int(1, cfg.height - 2)};
    int r = cfg.event_radius;

    for (int y = center.y - r; y <= center.y + r; ++y) {
        for (int x = center.x - r; x <= center.x + r; ++x) {
            Position p{x, y};
            if (!world.in_bounds(p) || manhattan(p, center) > r) continue;
            clear_cell(world, p, t);
        }
    }

    int want = world.rng.uniform_int(cfg.event_regen_min, cfg.event_regen_max);
    std::vector<Position> candidates;
    for (int y = center.y - r - 2; y <= center.y + r + 2; ++y) {
        for (int x = center.x - r - 2; x <= center.x + r + 2; ++x) {
            Position p{x, y};
            if (!world.in_bounds(p) || manhattan(p, center) > r + 2) continue;
            if (world.terrain_at(p) != Terrain::Empty) continue;
            if (world.thing_at(p) || world.dispenser_at(p)) continue;
            candidates.push_back(p);
        }
    }
    int placed = 0;
    while (placed < want && !candidates.empty()) {
        size_t i = static_cast<size_t>(
            world.rng.uniform_int(0, static_cast<int>(candidates.size()) - 1));
        world.set_terrain(candidates[i], Terrain::Obstacle);
        candidates.erase(candidates.begin() + static_cast<long>(i));
        ++placed;
    }
    return {center, r, placed};
}

}  // namespace gridsim
