#include "gridsim/world.hpp"

#include <algorithm>
#include <cstdio>

#include "gridsim/serial.hpp"

namespace gridsim {

using ordered_json = nlohmann::ordered_json;

std::string_view name_of(ThingKind k) { return k == ThingKind::Agent ? "agent" : "block"; }

// --- AttachmentGraph ---------------------------------------------------

void AttachmentGraph::add_edge(int a, int b) {
    adj_[a].insert(b);
    adj_[b].insert(a);
}

void AttachmentGraph::remove_edge(int a, int b) {
    auto drop = [this](int from, int to) {
        auto it = adj_.find(from);
        if (it == adj_.end()) return;
        it->second.erase(to);
        if (it->second.empty()) adj_.erase(it);
    };
    drop(a, b);
    drop(b, a);
}

bool AttachmentGraph::has_edge(int a, int b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) > 0;
}

void AttachmentGraph::remove_node(int id) {
    for (int n : neighbors(id)) remove_edge(id, n);
}

std::vector<int> AttachmentGraph::neighbors(int id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

int AttachmentGraph::degree(int id) const {
    auto it = adj_.find(id);
    return it == adj_.end() ? 0 : int(it->second.size());
}

std::set<int> AttachmentGraph::component_of(int id) const {
    std::set<int> seen{id};
    std::vector<int> stack{id};
    while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        for (int n : neighbors(cur))
            if (seen.insert(n).second) stack.push_back(n);
    }
    return seen;
}

std::vector<std::pair<int, int>> AttachmentGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [a, ns] : adj_)
        for (int b : ns)
            if (a < b) out.emplace_back(a, b);
    return out;
}

size_t AttachmentGraph::edge_count() const {
    size_t total = 0;
    for (const auto& [_, ns] : adj_) total += ns.size();
    return total / 2;
}

// --- WorldState --------------------------------------------------------

const Thing* WorldState::thing_at(Position p) const {
    auto it = occupancy_.find(p);
    return it == occupancy_.end() ? nullptr : &things.at(it->second);
}

const Dispenser* WorldState::dispenser_at(Position p) const {
    for (const auto& d : dispensers)
        if (d.pos == p) return &d;
    return nullptr;
}

Thing& WorldState::thing(int id) {
    auto it = things.find(id);
    if (it == things.end()) throw LookupError("unknown thing id " + std::to_string(id));
    return it->second;
}

const Thing& WorldState::thing(int id) const {
    auto it = things.find(id);
    if (it == things.end()) throw LookupError("unknown thing id " + std::to_string(id));
    return it->second;
}

int WorldState::agent_id(const std::string& name) const {
    auto it = agent_index_.find(name);
    return it == agent_index_.end() ? -1 : it->second;
}

std::vector<int> WorldState::agent_ids() const {
    std::vector<int> ids;
    for (const auto& [id, t] : things)
        if (t.is_agent()) ids.push_back(id);
    return ids;
}

void WorldState::move_thing(int id, Position to) {
    Thing& t = thing(id);
    occupancy_.erase(t.pos);
    t.pos = to;
    occupancy_[to] = id;
}

int WorldState::add_thing(Thing t) {
    t.id = next_thing_id++;
    occupancy_[t.pos] = t.id;
    if (t.is_agent()) agent_index_[t.name] = t.id;
    int id = t.id;
    things.emplace(id, std::move(t));
    return id;
}

void WorldState::remove_thing(int id) {
    const Thing& t = thing(id);
    occupancy_.erase(t.pos);
    if (t.is_agent()) agent_index_.erase(t.name);
    attachments.remove_node(id);
    things.erase(id);
}

// --- map generation ----------------------------------------------------

namespace {

// deterministic draw without replacement from a row-major candidate list
Position draw_cell(Rng& rng, std::vector<Position>& candidates) {
    size_t i = size_t(rng.uniform_int(0, int(candidates.size()) - 1));
    Position p = candidates[i];
    candidates.erase(candidates.begin() + long(i));
    return p;
}

}  // namespace

WorldState create_world(const SimConfig& config, uint64_t seed) {
    std::vector<std::vector<std::string>> names;
    for (const auto& team : config.teams) {
        std::vector<std::string> team_names;
        for (int i = 1; i <= config.agents_per_team; ++i) team_names.push_back(team + std::to_string(i));
        names.push_back(std::move(team_names));
    }
    return create_world(config, seed, names);
}

WorldState create_world(const SimConfig& config, uint64_t seed,
                        const std::vector<std::vector<std::string>>& team_agent_names) {
    config.validate();
    if (team_agent_names.size() != config.teams.size())
        throw ConfigError("agent name list does not match team count");

    WorldState w;
    w.config = config;
    w.config.seed = seed;
    w.rng = Rng(seed);
    w.terrain.assign(size_t(config.width) * config.height, Terrain::Empty);
    for (const auto& team : config.teams) w.scores[team] = 0;

    const int width = config.width, height = config.height;

    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (w.on_border({x, y})) w.set_terrain({x, y}, Terrain::Obstacle);

    for (int y = 1; y < height - 1; ++y)
        for (int x = 1; x < width - 1; ++x)
            if (w.rng.chance(config.obstacle_density)) w.set_terrain({x, y}, Terrain::Obstacle);

    // goal zones: diamond clusters, cleared of obstacles
    const int zr = config.goal_zone_radius;
    for (int zone = 0; zone < config.goal_zones; ++zone) {
        int margin = 1 + zr;
        if (width - 2 * margin <= 0 || height - 2 * margin <= 0)
            throw ConfigError("grid too small for goal zones");
        Position center{w.rng.uniform_int(margin, width - 1 - margin),
                        w.rng.uniform_int(margin, height - 1 - margin)};
        for (int dy = -zr; dy <= zr; ++dy)
            for (int dx = -zr; dx <= zr; ++dx) {
                if (std::abs(dx) + std::abs(dy) > zr) continue;
                w.set_terrain(center + Position{dx, dy}, Terrain::Goal);
            }
    }

    std::vector<Position> empty_cells;
    for (int y = 1; y < height - 1; ++y)
        for (int x = 1; x < width - 1; ++x)
            if (w.terrain_at({x, y}) == Terrain::Empty) empty_cells.push_back({x, y});

    const int dispenser_count = config.block_types * config.dispensers_per_type;
    if (int(empty_cells.size()) < dispenser_count)
        throw ConfigError("not enough free cells for dispensers");
    for (int type = 0; type < config.block_types; ++type)
        for (int i = 0; i < config.dispensers_per_type; ++i)
            w.dispensers.push_back({draw_cell(w.rng, empty_cells), "b" + std::to_string(type)});
    std::sort(w.dispensers.begin(), w.dispensers.end(),
              [](const Dispenser& a, const Dispenser& b) { return a.pos < b.pos; });

    // agents spawn on walkable unoccupied cells, dispensers included
    std::vector<Position> spawn_cells;
    for (int y = 1; y < height - 1; ++y)
        for (int x = 1; x < width - 1; ++x)
            if (w.terrain_at({x, y}) != Terrain::Obstacle) spawn_cells.push_back({x, y});
    if (int(spawn_cells.size()) < config.agents_per_team * int(config.teams.size()))
        throw ConfigError("more agents than free cells");

    for (size_t ti = 0; ti < config.teams.size(); ++ti) {
        if (int(team_agent_names[ti].size()) != config.agents_per_team)
            throw ConfigError("agent name list does not match agents_per_team");
        for (const auto& name : team_agent_names[ti]) {
            Thing agent;
            agent.kind = ThingKind::Agent;
            agent.pos = draw_cell(w.rng, spawn_cells);
            agent.name = name;
            agent.team = config.teams[ti];
            w.add_thing(std::move(agent));
        }
    }
    return w;
}

// --- attachment mechanics ----------------------------------------------

std::set<int> component_of(const WorldState& world, int thing_id) {
    world.thing(thing_id);  // raises LookupError
    return world.attachments.component_of(thing_id);
}

namespace {

// All-or-nothing rigid motion shared by translate and rotate. `target_of`
// maps a member's position to its destination.
template <typename Fn>
MoveResult apply_rigid_motion(WorldState& world, const std::set<int>& component, Fn target_of) {
    for (int id : component) {
        Position target = target_of(world.thing(id).pos);
        if (!world.in_bounds(target)) return {false, target};
        if (world.terrain_at(target) == Terrain::Obstacle) return {false, target};
        const Thing* occupant = world.thing_at(target);
        if (occupant && component.count(occupant->id) == 0) return {false, target};
    }
    // lift everything first so moves cannot collide with component members
    std::vector<std::pair<int, Position>> moves;
    for (int id : component) moves.emplace_back(id, target_of(world.thing(id).pos));
    for (auto& [id, _] : moves) world.move_thing(id, {-1 - id, -1});
    for (auto& [id, target] : moves) world.move_thing(id, target);
    return {true, {}};
}

}  // namespace

MoveResult translate_component(WorldState& world, const std::set<int>& component, Direction dir) {
    const Position d = offset_of(dir);
    return apply_rigid_motion(world, component, [d](Position p) { return p + d; });
}

MoveResult rotate_component(WorldState& world, int agent_id, Rotation rot) {
    const Thing& agent = world.thing(agent_id);
    if (!agent.is_agent()) throw LookupError("rotate pivot must be an agent");
    const Position pivot = agent.pos;
    auto component = world.attachments.component_of(agent_id);
    return apply_rigid_motion(world, component,
                              [pivot, rot](Position p) { return pivot + rotate(p - pivot, rot); });
}

void prune_orphan_components(WorldState& world, const std::set<int>& candidates) {
    std::set<int> visited;
    for (int id : candidates) {
        if (visited.count(id) || world.things.find(id) == world.things.end()) continue;
        auto comp = world.attachments.component_of(id);
        visited.insert(comp.begin(), comp.end());
        bool has_agent = std::any_of(comp.begin(), comp.end(),
                                     [&](int c) { return world.thing(c).is_agent(); });
        if (!has_agent)
            for (int c : comp) world.attachments.remove_node(c);
    }
}

// --- serialization -----------------------------------------------------

ordered_json config_to_json(const SimConfig& c) {
    ordered_json j;
    j["steps"] = c.steps;
    j["agentsPerTeam"] = c.agents_per_team;
    j["width"] = c.width;
    j["height"] = c.height;
    j["visionRange"] = c.vision_range;
    j["maxBlocks"] = c.max_blocks;
    j["clearEventProbability"] = c.clear_event_probability;
    j["clearCharge"] = c.clear_charge;
    j["disableDuration"] = c.disable_duration;
    j["deadlineMs"] = c.deadline_ms;
    j["seed"] = c.seed;
    j["teams"] = c.teams;
    j["obstacleDensity"] = c.obstacle_density;
    j["goalZones"] = c.goal_zones;
    j["goalZoneRadius"] = c.goal_zone_radius;
    j["dispensersPerType"] = c.dispensers_per_type;
    j["blockTypes"] = c.block_types;
    j["maxComponentSize"] = c.max_component_size;
    j["eventRadius"] = c.event_radius;
    j["eventRegenMin"] = c.event_regen_min;
    j["eventRegenMax"] = c.event_regen_max;
    j["taskCap"] = c.task_cap;
    j["taskSpawnProbability"] = c.task_spawn_probability;
    j["taskDeadlineMin"] = c.task_deadline_min;
    j["taskDeadlineMax"] = c.task_deadline_max;
    j["connectTimeoutMs"] = c.connect_timeout_ms;
    return j;
}

SimConfig config_from_json(const ordered_json& j) {
    SimConfig c;
    c.steps = j.at("steps");
    c.agents_per_team = j.at("agentsPerTeam");
    c.width = j.at("width");
    c.height = j.at("height");
    c.vision_range = j.at("visionRange");
    c.max_blocks = j.at("maxBlocks");
    c.clear_event_probability = j.at("clearEventProbability");
    c.clear_charge = j.at("clearCharge");
    c.disable_duration = j.at("disableDuration");
    c.deadline_ms = j.at("deadlineMs");
    c.seed = j.at("seed");
    c.teams = j.at("teams").get<std::vector<std::string>>();
    c.obstacle_density = j.at("obstacleDensity");
    c.goal_zones = j.at("goalZones");
    c.goal_zone_radius = j.at("goalZoneRadius");
    c.dispensers_per_type = j.at("dispensersPerType");
    c.block_types = j.at("blockTypes");
    c.max_component_size = j.at("maxComponentSize");
    c.event_radius = j.at("eventRadius");
    c.event_regen_min = j.at("eventRegenMin");
    c.event_regen_max = j.at("eventRegenMax");
    c.task_cap = j.at("taskCap");
    c.task_spawn_probability = j.at("taskSpawnProbability");
    c.task_deadline_min = j.at("taskDeadlineMin");
    c.task_deadline_max = j.at("taskDeadlineMax");
    c.connect_timeout_ms = j.at("connectTimeoutMs");
    return c;
}

ordered_json task_to_json(const Task& t) {
    ordered_json j;
    j["name"] = t.name;
    j["reward"] = t.reward;
    j["deadline"] = t.deadline;
    j["spawnedAt"] = t.spawned_at;
    ordered_json reqs = ordered_json::array();
    for (const auto& r : t.requirements)
        reqs.push_back({{"x", r.pos.x}, {"y", r.pos.y}, {"blockType", r.block_type}});
    j["requirements"] = std::move(reqs);
    return j;
}

Task task_from_json(const ordered_json& j) {
    Task t;
    t.name = j.at("name");
    t.reward = j.at("reward");
    t.deadline = j.at("deadline");
    t.spawned_at = j.at("spawnedAt");
    for (const auto& r : j.at("requirements"))
        t.requirements.push_back({{r.at("x"), r.at("y")}, r.at("blockType")});
    return t;
}

ordered_json action_to_json(const Action& a) {
    ordered_json j;
    j["kind"] = std::string(name_of(a.kind));
    ordered_json params = ordered_json::array();
    switch (a.kind) {
        case ActionKind::Move:
        case ActionKind::Attach:
        case ActionKind::Detach:
        case ActionKind::Request:
            params.push_back(std::string(name_of(a.dir)));
            break;
        case ActionKind::Rotate:
            params.push_back(std::string(name_of(a.rot)));
            break;
        case ActionKind::Connect:
            params.push_back(a.partner);
            params.push_back(a.p1.x);
            params.push_back(a.p1.y);
            break;
        case ActionKind::Disconnect:
            params.push_back(a.p1.x);
            params.push_back(a.p1.y);
            params.push_back(a.p2.x);
            params.push_back(a.p2.y);
            break;
        case ActionKind::Clear:
            params.push_back(a.p1.x);
            params.push_back(a.p1.y);
            break;
        case ActionKind::Submit:
            params.push_back(a.task);
            break;
        case ActionKind::Skip:
        case ActionKind::NoOp:
            break;
    }
    j["params"] = std::move(params);
    return j;
}

Action action_from_json(const ordered_json& j) {
    auto kind = action_kind_from(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown action kind");
    const auto& p = j.at("params");
    auto need = [&](size_t n) {
        if (!p.is_array() || p.size() != n) throw std::invalid_argument("bad action params");
    };
    auto dir_at = [&](size_t i) {
        auto d = direction_from(p.at(i).get<std::string>());
        if (!d) throw std::invalid_argument("bad direction");
        return *d;
    };
    auto int_at = [&](size_t i) {
        if (!p.at(i).is_number_integer()) throw std::invalid_argument("bad coordinate");
        return p.at(i).get<int>();
    };
    switch (*kind) {
        case ActionKind::Move: need(1); return Action::move(dir_at(0));
        case ActionKind::Attach: need(1); return Action::attach(dir_at(0));
        case ActionKind::Detach: need(1); return Action::detach(dir_at(0));
        case ActionKind::Request: need(1); return Action::request(dir_at(0));
        case ActionKind::Rotate: {
            need(1);
            auto r = rotation_from(p.at(0).get<std::string>());
            if (!r) throw std::invalid_argument("bad rotation");
            return Action::rotate(*r);
        }
        case ActionKind::Connect:
            need(3);
            return Action::connect(p.at(0).get<std::string>(), {int_at(1), int_at(2)});
        case ActionKind::Disconnect:
            need(4);
            return Action::disconnect({int_at(0), int_at(1)}, {int_at(2), int_at(3)});
        case ActionKind::Clear: need(2); return Action::clear({int_at(0), int_at(1)});
        case ActionKind::Submit: need(1); return Action::submit(p.at(0).get<std::string>());
        case ActionKind::Skip: need(0); return Action::skip();
        case ActionKind::NoOp: need(0); return Action::no_op();
    }
    throw std::invalid_argument("unknown action kind");
}

ordered_json thing_to_json(const Thing& t) {
    ordered_json j;
    j["id"] = t.id;
    j["kind"] = std::string(name_of(t.kind));
    j["x"] = t.pos.x;
    j["y"] = t.pos.y;
    if (t.is_agent()) {
        j["name"] = t.name;
        j["team"] = t.team;
        j["disabledUntil"] = t.disabled_until;
        j["chargeX"] = t.charge_target.x;
        j["chargeY"] = t.charge_target.y;
        j["chargeCount"] = t.charge_count;
        if (t.last_action) {
            ordered_json la = action_to_json(t.last_action->action);
            la["outcome"] = std::string(name_of(t.last_action->outcome));
            j["lastAction"] = std::move(la);
        } else {
            j["lastAction"] = nullptr;
        }
    } else {
        j["blockType"] = t.block_type;
    }
    return j;
}

ordered_json world_to_json(const WorldState& w) {
    ordered_json j;
    j["version"] = 1;
    j["config"] = config_to_json(w.config);
    j["step"] = w.step;
    ordered_json rows = ordered_json::array();
    for (int y = 0; y < w.height(); ++y) {
        std::string row(size_t(w.width()), '.');
        for (int x = 0; x < w.width(); ++x) {
            Terrain t = w.terrain_at({x, y});
            if (t == Terrain::Obstacle) row[size_t(x)] = '#';
            else if (t == Terrain::Goal) row[size_t(x)] = 'G';
        }
        rows.push_back(std::move(row));
    }
    j["terrain"] = std::move(rows);
    ordered_json dispensers = ordered_json::array();
    for (const auto& d : w.dispensers)
        dispensers.push_back({{"x", d.pos.x}, {"y", d.pos.y}, {"blockType", d.block_type}});
    j["dispensers"] = std::move(dispensers);
    ordered_json things = ordered_json::array();
    for (const auto& [_, t] : w.things) things.push_back(thing_to_json(t));
    j["things"] = std::move(things);
    ordered_json edges = ordered_json::array();
    for (auto [a, b] : w.attachments.edges()) edges.push_back({a, b});
    j["attachments"] = std::move(edges);
    ordered_json tasks = ordered_json::array();
    for (const auto& t : w.tasks) tasks.push_back(task_to_json(t));
    j["tasks"] = std::move(tasks);
    ordered_json scores;
    for (const auto& [team, score] : w.scores) scores[team] = score;
    j["scores"] = std::move(scores);
    ordered_json markers = ordered_json::array();
    for (const auto& m : w.markers) markers.push_back({{"x", m.pos.x}, {"y", m.pos.y}, {"expiry", m.expiry}});
    j["markers"] = std::move(markers);
    j["nextThingId"] = w.next_thing_id;
    j["nextTaskId"] = w.next_task_id;
    j["rng"] = w.rng.to_string();
    return j;
}

Thing thing_from_json(const ordered_json& jt) {
    Thing t;
    t.id = jt.at("id");
    t.pos = {jt.at("x"), jt.at("y")};
    std::string kind = jt.at("kind");
    if (kind == "agent") {
        t.kind = ThingKind::Agent;
        t.name = jt.at("name");
        t.team = jt.at("team");
        t.disabled_until = jt.at("disabledUntil");
        t.charge_target = {jt.at("chargeX"), jt.at("chargeY")};
        t.charge_count = jt.at("chargeCount");
        const auto& la = jt.at("lastAction");
        if (!la.is_null()) {
            ActionRecord rec;
            rec.action = action_from_json(la);
            rec.outcome = outcome_from(la.at("outcome").get<std::string>()).value();
            t.last_action = rec;
        }
    } else {
        t.kind = ThingKind::Block;
        t.block_type = jt.at("blockType");
    }
    return t;
}

WorldState world_from_json(const ordered_json& j) {
    WorldState w;
    w.config = config_from_json(j.at("config"));
    w.step = j.at("step");
    w.terrain.assign(size_t(w.width()) * w.height(), Terrain::Empty);
    const auto& rows = j.at("terrain");
    for (int y = 0; y < w.height(); ++y) {
        const std::string& row = rows.at(size_t(y)).get_ref<const std::string&>();
        for (int x = 0; x < w.width(); ++x) {
            char c = row.at(size_t(x));
            w.set_terrain({x, y}, c == '#' ? Terrain::Obstacle
                                           : (c == 'G' ? Terrain::Goal : Terrain::Empty));
        }
    }
    for (const auto& d : j.at("dispensers"))
        w.dispensers.push_back({{d.at("x"), d.at("y")}, d.at("blockType")});
    for (const auto& jt : j.at("things")) {
        Thing t = thing_from_json(jt);
        w.occupancy_[t.pos] = t.id;
        if (t.is_agent()) w.agent_index_[t.name] = t.id;
        w.things.emplace(t.id, std::move(t));
    }
    for (const auto& e : j.at("attachments")) w.attachments.add_edge(e.at(0), e.at(1));
    for (const auto& jt : j.at("tasks")) w.tasks.push_back(task_from_json(jt));
    for (const auto& [team, score] : j.at("scores").items()) w.scores[team] = score;
    for (const auto& m : j.at("markers"))
        w.markers.push_back({{m.at("x"), m.at("y")}, m.at("expiry")});
    w.next_thing_id = j.at("nextThingId");
    w.next_task_id = j.at("nextTaskId");
    w.rng = Rng::from_string(j.at("rng"));
    return w;
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x00000100000001b3ull;
    }
    return hash;
}

std::string hash_hex(uint64_t value) {
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", (unsigned long long)value);
    return buf;
}

std::string world_hash(const WorldState& world) {
    return hash_hex(fnv1a64(world_to_json(world).dump()));
}

}  // namespace gridsim
