#include "gridsim/replay.hpp"

#include <map>
#include <stdexcept>

#include "gridsim/serial.hpp"

namespace gridsim {

using nlohmann::ordered_json;

namespace {

std::string json_hash(const ordered_json& world) { return hash_hex(fnv1a64(world.dump())); }

ordered_json event_to_json(const ClearEvent& e) {
    ordered_json j;
    j["x"] = e.center.x;
    j["y"] = e.center.y;
    j["radius"] = e.radius;
    j["regenerated"] = e.regenerated;
    return j;
}

}  // namespace

ReplayRecorder::ReplayRecorder(const WorldState& initial, std::string sim_id, int snapshot_every)
    : snapshot_every_(snapshot_every) {
    prev_ = world_to_json(initial);
    doc_["version"] = 1;
    doc_["simId"] = std::move(sim_id);
    doc_["config"] = config_to_json(initial.config);
    ordered_json teams = ordered_json::array();
    for (const auto& t : initial.config.teams) teams.push_back(t);
    doc_["teams"] = std::move(teams);
    ordered_json frame;
    frame["step"] = initial.step;
    frame["snapshot"] = prev_;
    frame["hash"] = json_hash(prev_);
    doc_["frames"] = ordered_json::array({std::move(frame)});
}

void ReplayRecorder::record_step(const WorldState& world, const StepOutput& out) {
    ordered_json cur = world_to_json(world);
    ordered_json frame;
    frame["step"] = world.step;
    ordered_json actions = ordered_json::array();
    for (const ActionResult& r : out.results) {
        ordered_json a;
        a["agent"] = r.agent_id;
        a["action"] = action_to_json(r.action);
        a["outcome"] = std::string(name_of(r.outcome));
        actions.push_back(std::move(a));
    }
    frame["actions"] = std::move(actions);
    ordered_json events = ordered_json::array();
    for (const ClearEvent& e : out.events) events.push_back(event_to_json(e));
    frame["events"] = std::move(events);
    if (world.step % snapshot_every_ == 0) {
        frame["snapshot"] = cur;
    } else {
        frame["delta"] = world_delta(prev_, cur);
    }
    frame["hash"] = json_hash(cur);
    doc_["frames"].push_back(std::move(frame));
    prev_ = std::move(cur);
}

ordered_json ReplayRecorder::finish() {
    doc_["finalHash"] = doc_["frames"].back()["hash"];
    return doc_;
}

ordered_json world_delta(const ordered_json& before, const ordered_json& after) {
    ordered_json d;
    d["step"] = after.at("step");

    std::map<int, const ordered_json*> old_things;
    for (const auto& t : before.at("things")) old_things[t.at("id").get<int>()] = &t;
    ordered_json changed = ordered_json::array();
    std::map<int, bool> seen;
    for (const auto& t : after.at("things")) {
        int id = t.at("id");
        seen[id] = true;
        auto it = old_things.find(id);
        if (it == old_things.end() || *it->second != t) changed.push_back(t);
    }
    d["things"] = std::move(changed);
    ordered_json removed = ordered_json::array();
    for (const auto& [id, _] : old_things) {
        if (!seen.count(id)) removed.push_back(id);
    }
    d["removedThings"] = std::move(removed);

    ordered_json rows = ordered_json::array();
    const auto& old_rows = before.at("terrain");
    const auto& new_rows = after.at("terrain");
    for (size_t y = 0; y < new_rows.size(); ++y) {
        if (old_rows.at(y) != new_rows.at(y)) {
            rows.push_back({{"row", y}, {"cells", new_rows.at(y)}});
        }
    }
    d["terrain"] = std::move(rows);

    d["attachments"] = after.at("attachments");
    d["tasks"] = after.at("tasks");
    d["scores"] = after.at("scores");
    d["markers"] = after.at("markers");
    d["rng"] = after.at("rng");
    d["nextThingId"] = after.at("nextThingId");
    d["nextTaskId"] = after.at("nextTaskId");
    return d;
}

void apply_world_delta(ordered_json& world, const ordered_json& delta) {
    world["step"] = delta.at("step");

    std::map<int, ordered_json> things;
    for (const auto& t : world.at("things")) things[t.at("id").get<int>()] = t;
    for (const auto& t : delta.at("things")) things[t.at("id").get<int>()] = t;
    for (const auto& id : delta.at("removedThings")) things.erase(id.get<int>());
    ordered_json arr = ordered_json::array();
    for (auto& [_, t] : things) arr.push_back(std::move(t));
    world["things"] = std::move(arr);

    for (const auto& row : delta.at("terrain")) {
        world["terrain"].at(row.at("row").get<size_t>()) = row.at("cells");
    }

    world["attachments"] = delta.at("attachments");
    world["tasks"] = delta.at("tasks");
    world["scores"] = delta.at("scores");
    world["markers"] = delta.at("markers");
    world["rng"] = delta.at("rng");
    world["nextThingId"] = delta.at("nextThingId");
    world["nextTaskId"] = delta.at("nextTaskId");
}

ordered_json reconstruct_frame(const ordered_json& replay, int step) {
    const auto& frames = replay.at("frames");
    if (step < 0 || static_cast<size_t>(step) >= frames.size()) {
        throw std::out_of_range("no frame " + std::to_string(step));
    }
    int base = step;
    while (!frames.at(base).contains("snapshot")) --base;
    ordered_json world = frames.at(base).at("snapshot");
    for (int f = base + 1; f <= step; ++f) apply_world_delta(world, frames.at(f).at("delta"));
    return world;
}

VerifyResult verify_replay(const ordered_json& replay) {
    SimConfig cfg;
    try {
        cfg = config_from_json(replay.at("config"));
    } catch (const std::exception& e) {
        return {false, 0, std::string("bad header: ") + e.what()};
    }
    const auto& frames = replay.at("frames");
    if (frames.empty()) return {false, 0, "no frames"};

    WorldState world = create_world(cfg, cfg.seed);
    if (world_hash(world) != frames.at(0).at("hash")) {
        return {false, 0, "initial world differs from header seed"};
    }
    for (size_t f = 1; f < frames.size(); ++f) {
        const auto& frame = frames.at(f);
        std::map<int, Action> actions;
        try {
            for (const auto& a : frame.at("actions")) {
                actions[a.at("agent").get<int>()] = action_from_json(a.at("action"));
            }
        } catch (const std::exception& e) {
            return {false, static_cast<int>(f), std::string("bad frame: ") + e.what()};
        }
        step(world, actions);
        if (world_hash(world) != frame.at("hash")) {
            return {false, static_cast<int>(f), "frame hash mismatch"};
        }
    }
    if (replay.at("finalHash") != frames.back().at("hash")) {
        return {false, static_cast<int>(frames.size()) - 1, "final hash mismatch"};
    }
    return {};
}

}  // namespace gridsim
