#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridsim/actions.hpp"
#include "gridsim/config.hpp"
#include "gridsim/geometry.hpp"
#include "gridsim/rng.hpp"
#include "gridsim/tasks.hpp"

#include "json.hpp"

namespace gridsim {

struct LookupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Terrain : uint8_t { Empty, Obstacle, Goal };

enum class ThingKind : uint8_t { Agent, Block };

std::string_view name_of(ThingKind k);

struct Thing {
    int id = 0;
    ThingKind kind = ThingKind::Block;
    Position pos{};

    // agents only
    std::string name;
    std::string team;
    int disabled_until = 0;  // 0 when enabled
    Position charge_target{};
    int charge_count = 0;
    std::optional<ActionRecord> last_action;

    // blocks only
    std::string block_type;

    bool is_agent() const { return kind == ThingKind::Agent; }
    bool is_block() const { return kind == ThingKind::Block; }
};

struct Dispenser {
    Position pos{};
    std::string block_type;
};

// Undirected attachment edges between things on adjacent cells. Components
// stay trees; cycle-creating connects are rejected by the engine.
class AttachmentGraph {
  public:
    void add_edge(int a, int b);
    void remove_edge(int a, int b);
    bool has_edge(int a, int b) const;
    void remove_node(int id);
    // sorted neighbor ids; empty for unknown nodes
    std::vector<int> neighbors(int id) const;
    int degree(int id) const;
    std::set<int> component_of(int id) const;
    // sorted list of sorted pairs, the canonical serialized form
    std::vector<std::pair<int, int>> edges() const;
    size_t edge_count() const;
    void clear() { adj_.clear(); }

  private:
    std::map<int, std::set<int>> adj_;
};

struct ClearMarker {
    Position pos{};
    int expiry = 0;  // dropped at the start of this step
};

// Full authoritative simulation state.
struct WorldState {
    SimConfig config;
    int step = 0;
    std::vector<Terrain> terrain;  // row-major, width * height
    std::vector<Dispenser> dispensers;
    std::map<int, Thing> things;  // by id
    AttachmentGraph attachments;
    std::vector<Task> tasks;  // active, in spawn order
    std::map<std::string, long long> scores;
    std::vector<ClearMarker> markers;  // sorted by position
    Rng rng;
    int next_thing_id = 1;
    int next_task_id = 0;

    int width() const { return config.width; }
    int height() const { return config.height; }
    bool in_bounds(Position p) const {
        return p.x >= 0 && p.x < width() && p.y >= 0 && p.y < height();
    }
    bool on_border(Position p) const {
        return p.x == 0 || p.y == 0 || p.x == width() - 1 || p.y == height() - 1;
    }
    Terrain terrain_at(Position p) const { return terrain[size_t(p.y) * width() + p.x]; }
    void set_terrain(Position p, Terrain t) { terrain[size_t(p.y) * width() + p.x] = t; }

    // id of the thing occupying p, or -1
    const Thing* thing_at(Position p) const;  // nullptr when empty
    const Dispenser* dispenser_at(Position p) const;

    Thing& thing(int id);
    const Thing& thing(int id) const;
    int agent_id(const std::string& name) const;  // -1 when unknown
    std::vector<int> agent_ids() const;           // sorted

    bool cell_free(Position p) const {  // walkable and unoccupied
        return in_bounds(p) && terrain_at(p) != Terrain::Obstacle && thing_at(p) == nullptr;
    }

    void move_thing(int id, Position to);
    int add_thing(Thing t);  // assigns the id
    void remove_thing(int id);

  private:
    std::unordered_map<Position, int, PositionHash> occupancy_;
    std::unordered_map<std::string, int> agent_index_;
    friend WorldState world_from_json(const nlohmann::ordered_json&);
};

// Seeded map generation: obstacle border, density-sampled interior, goal
// zones, dispensers and agent spawns. Identical (config, seed) pairs yield
// identical worlds.
WorldState create_world(const SimConfig& config, uint64_t seed);
WorldState create_world(const SimConfig& config, uint64_t seed,
                        const std::vector<std::vector<std::string>>& team_agent_names);

// Connected component of the attachment graph containing thing_id,
// including thing_id itself. Throws LookupError for unknown ids.
std::set<int> component_of(const WorldState& world, int thing_id);

struct MoveResult {
    bool ok = false;
    Position blocked{};  // offending cell when !ok
};

// Shifts a full component one cell; all-or-nothing. Cells vacated by the
// component itself count as free.
MoveResult translate_component(WorldState& world, const std::set<int>& component, Direction dir);

// Rotates the agent's component 90 degrees around the agent's cell.
MoveResult rotate_component(WorldState& world, int agent_id, Rotation rot);

// Drops all edges of components (reached from the candidate ids) that no
// longer contain an agent, turning their blocks into free blocks in place.
void prune_orphan_components(WorldState& world, const std::set<int>& candidates);

// Versioned, byte-stable serialization (fixed field order).
nlohmann::ordered_json world_to_json(const WorldState& world);
WorldState world_from_json(const nlohmann::ordered_json& j);

uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(uint64_t value);  // 16 lowercase hex digits
std::string world_hash(const WorldState& world);

}  // namespace gridsim
