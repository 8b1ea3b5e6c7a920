#include "gridsim/tasks.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gridsim/world.hpp"

namespace gridsim {

long long task_reward(int block_count) {
    if (block_count < 2) throw std::invalid_argument("task needs at least two blocks");
    return 10LL * block_count * block_count;
}

Task generate_task(Rng& rng, const SimConfig& cfg, int current_step, int task_id) {
    int count = rng.uniform_int(2, cfg.max_blocks);
    std::set<Position> cells;
    Position cursor{0, 1};
    cells.insert(cursor);
    while (static_cast<int>(cells.size()) < count) {
        Position next = cursor + offset_of(static_cast<Direction>(rng.uniform_int(0, 3)));
        if (next == Position{0, 0}) continue;
        cursor = next;
        cells.insert(cursor);
    }

    Task task;
    task.name = "task" + std::to_string(task_id);
    task.requirements.reserve(cells.size());
    for (const Position& pos : cells) {
        task.requirements.push_back(
            {pos, "b" + std::to_string(rng.uniform_int(0, cfg.block_types - 1))});
    }
    task.reward = task_reward(count);
    task.deadline = current_step + rng.uniform_int(cfg.task_deadline_min, cfg.task_deadline_max);
    task.spawned_at = current_step;
    return task;
}

SubmitResult check_submission(WorldState& world, int agent_id, const std::string& task_name) {
    int t = world.step + 1;
    auto it = std::find_if(world.tasks.begin(), world.tasks.end(),
                           [&](const Task& task) { return task.name == task_name; });
    if (it == world.tasks.end() || it->deadline < t) return {Outcome::FailedTarget, {}};

    const Thing& agent = world.thing(agent_id);
    if (world.terrain_at(agent.pos) != Terrain::Goal) return {Outcome::FailedTarget, {}};

    std::set<int> component = world.attachments.component_of(agent_id);
    std::vector<int> consumed;
    consumed.reserve(it->requirements.size());
    for (const Requirement& req : it->requirements) {
        const Thing* block = world.thing_at(agent.pos + req.pos);
        if (!block || block->kind != ThingKind::Block || block->block_type != req.block_type ||
            !component.count(block->id)) {
            return {Outcome::FailedTarget, {}};
        }
        consumed.push_back(block->id);
    }

    std::set<int> orphan_candidates;
    for (int id : consumed) {
        for (int neighbor : world.attachments.neighbors(id)) orphan_candidates.insert(neighbor);
    }
    for (int id : consumed) {
        orphan_candidates.erase(id);
        world.remove_thing(id);
    }
    prune_orphan_components(world, orphan_candidates);

    world.scores[agent.team] += it->reward;
    world.tasks.erase(it);
    return {Outcome::Success, consumed};
}

}  // namespace gridsim
