#include "gridsim/perception.hpp"

#include <algorithm>
#include <cstdlib>

#include "gridsim/serial.hpp"

namespace gridsim {

using nlohmann::ordered_json;

Percept compute_percept(const WorldState& world, int agent_id) {
    const Thing& self = world.thing(agent_id);
    const int r = world.config.vision_range;

    Percept p;
    p.step = world.step;
    auto score = world.scores.find(self.team);
    p.score = score == world.scores.end() ? 0 : score->second;
    p.last_action = self.last_action;
    p.disabled = self.disabled_until > world.step;
    p.tasks = world.tasks;

    for (int dy = -r; dy <= r; ++dy) {
        int span = r - std::abs(dy);
        for (int dx = -span; dx <= span; ++dx) {
            Position rel{dx, dy};
            Position abs = self.pos + rel;
            if (!world.in_bounds(abs)) continue;
            if (const Thing* t = world.thing_at(abs)) {
                p.things.push_back({rel, t->kind, t->is_agent() ? t->team : t->block_type});
                if (world.attachments.degree(t->id) > 0) p.attached.push_back(rel);
            }
            Terrain terrain = world.terrain_at(abs);
            if (terrain != Terrain::Empty) p.terrain.push_back({rel, terrain});
            if (const Dispenser* d = world.dispenser_at(abs)) {
                p.dispensers.push_back({rel, d->block_type});
            }
        }
    }
    for (const ClearMarker& m : world.markers) {
        if (manhattan(m.pos, self.pos) <= r) p.markers.push_back(m.pos - self.pos);
    }
    std::sort(p.markers.begin(), p.markers.end());
    return p;
}

namespace {

ordered_json positions_to_json(const std::vector<Position>& v) {
    ordered_json arr = ordered_json::array();
    for (Position p : v) arr.push_back({{"x", p.x}, {"y", p.y}});
    return arr;
}

std::vector<Position> positions_from_json(const ordered_json& arr) {
    std::vector<Position> v;
    for (const auto& e : arr) v.push_back({e.at("x"), e.at("y")});
    return v;
}

}  // namespace

ordered_json percept_to_json(const Percept& p) {
    ordered_json j;
    j["step"] = p.step;
    j["score"] = p.score;
    if (p.last_action) {
        ordered_json la = action_to_json(p.last_action->action);
        la["outcome"] = std::string(name_of(p.last_action->outcome));
        j["lastAction"] = std::move(la);
    } else {
        j["lastAction"] = nullptr;
    }
    ordered_json things = ordered_json::array();
    for (const PerceptThing& t : p.things) {
        things.push_back({{"x", t.pos.x},
                          {"y", t.pos.y},
                          {"type", std::string(name_of(t.kind))},
                          {"details", t.detail}});
    }
    j["things"] = std::move(things);
    ordered_json terrain = ordered_json::array();
    for (const PerceptTerrain& t : p.terrain) {
        terrain.push_back({{"x", t.pos.x},
                           {"y", t.pos.y},
                           {"type", t.terrain == Terrain::Goal ? "goal" : "obstacle"}});
    }
    j["terrain"] = std::move(terrain);
    ordered_json dispensers = ordered_json::array();
    for (const PerceptDispenser& d : p.dispensers) {
        dispensers.push_back({{"x", d.pos.x}, {"y", d.pos.y}, {"type", d.block_type}});
    }
    j["dispensers"] = std::move(dispensers);
    j["markers"] = positions_to_json(p.markers);
    j["attached"] = positions_to_json(p.attached);
    ordered_json tasks = ordered_json::array();
    for (const Task& t : p.tasks) tasks.push_back(task_to_json(t));
    j["tasks"] = std::move(tasks);
    j["disabled"] = p.disabled;
    j["deadline"] = p.deadline_ms;
    return j;
}

Percept percept_from_json(const ordered_json& j) {
    Percept p;
    p.step = j.at("step");
    p.score = j.at("score");
    if (!j.at("lastAction").is_null()) {
        const auto& la = j.at("lastAction");
        ActionRecord rec;
        rec.action = action_from_json(la);
        auto outcome = outcome_from(la.at("outcome").get<std::string>());
        if (!outcome) throw std::invalid_argument("unknown outcome");
        rec.outcome = *outcome;
        p.last_action = rec;
    }
    for (const auto& e : j.at("things")) {
        PerceptThing t;
        t.pos = {e.at("x"), e.at("y")};
        std::string kind = e.at("type");
        if (kind != "agent" && kind != "block") throw std::invalid_argument("unknown thing type");
        t.kind = kind == "agent" ? ThingKind::Agent : ThingKind::Block;
        t.detail = e.at("details");
        p.things.push_back(std::move(t));
    }
    for (const auto& e : j.at("terrain")) {
        PerceptTerrain t;
        t.pos = {e.at("x"), e.at("y")};
        std::string kind = e.at("type");
        if (kind != "goal" && kind != "obstacle") throw std::invalid_argument("unknown terrain");
        t.terrain = kind == "goal" ? Terrain::Goal : Terrain::Obstacle;
        p.terrain.push_back(std::move(t));
    }
    for (const auto& e : j.at("dispensers")) {
        p.dispensers.push_back({{e.at("x"), e.at("y")}, e.at("type")});
    }
    p.markers = positions_from_json(j.at("markers"));
    p.attached = positions_from_json(j.at("attached"));
    for (const auto& e : j.at("tasks")) p.tasks.push_back(task_from_json(e));
    p.disabled = j.at("disabled");
    p.deadline_ms = j.at("deadline");
    return p;
}

}  // namespace gridsim
