#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridsim/actions.hpp"
#include "gridsim/tasks.hpp"
#include "gridsim/world.hpp"
#include "json.hpp"

namespace gridsim {

// A thing as seen by an agent: no ids, team name or block type as detail.
struct PerceptThing {
    Position pos;  // relative to the perceiving agent
    ThingKind kind = ThingKind::Block;
    std::string detail;
    bool operator==(const PerceptThing&) const = default;
};

struct PerceptTerrain {
    Position pos;
    Terrain terrain = Terrain::Obstacle;  // obstacle or goal, never empty
    bool operator==(const PerceptTerrain&) const = default;
};

struct PerceptDispenser {
    Position pos;
    std::string block_type;
    bool operator==(const PerceptDispenser&) const = default;
};

// Everything an agent learns in one step. All positions are relative and lie
// within the vision diamond; (0,0) is the perceiving agent itself.
struct Percept {
    int step = 0;
    long long score = 0;
    std::optional<ActionRecord> last_action;
    std::vector<PerceptThing> things;
    std::vector<PerceptTerrain> terrain;
    std::vector<PerceptDispenser> dispensers;
    std::vector<Position> markers;   // active clear markers in range
    std::vector<Position> attached;  // in-range things with at least one attachment
    std::vector<Task> tasks;         // all active tasks, not distance-gated
    bool disabled = false;
    long long deadline_ms = 0;  // absolute wall clock; filled in by the server
    bool operator==(const Percept&) const = default;
};

// Builds the percept for one agent from the current world. Throws LookupError
// for an unknown agent id. Scan order is the vision diamond row by row, so
// the lists are deterministically ordered.
Percept compute_percept(const WorldState& world, int agent_id);

nlohmann::ordered_json percept_to_json(const Percept& p);
Percept percept_from_json(const nlohmann::ordered_json& j);

}  // namespace gridsim
