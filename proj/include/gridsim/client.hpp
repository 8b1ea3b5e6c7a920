#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridsim/geometry.hpp"
#include "gridsim/perception.hpp"

namespace gridsim {

struct TeamBlackboard;

// What an agent remembers about one cell.
struct MapCell {
    int step = -1;  // when last seen
    Terrain terrain = Terrain::Empty;
    bool has_thing = false;
    ThingKind thing_kind = ThingKind::Block;
    std::string thing_detail;
    bool has_dispenser = false;
    std::string dispenser_type;
    bool operator==(const MapCell&) const = default;
};

// Dead-reckoning map anchored at the agent's spawn cell. The agent's believed
// position advances only on confirmed successful moves, so coordinates stay
// exact. Cells in the vision diamond with nothing reported are recorded as
// seen-empty; cells beyond the map border are indistinguishable from empty
// ones, which is the best an agent can know.
class LocalMap {
  public:
    // Applies the percept's own-move dead reckoning, then folds in all
    // cells of the vision diamond at the current offset.
    void observe(const Percept& p, int vision);

    Position offset() const { return offset_; }
    const std::map<Position, MapCell>& cells() const { return cells_; }
    const MapCell* at(Position p) const;

    void put(Position p, const MapCell& cell);

  private:
    Position offset_{};
    std::map<Position, MapCell> cells_;
};

struct MergeResult {
    LocalMap map;                     // in a's frame
    std::vector<Position> conflicts;  // same-step contradictory terrain, a's frame
};

// Unions b's knowledge into a's frame through b_anchor_in_a (b's spawn
// expressed in a's spawn coordinates). The newer sighting wins per cell; ties
// keep a's value and report a conflict when the terrain contradicts.
MergeResult merge_maps(const LocalMap& a, const LocalMap& b, Position b_anchor_in_a);

struct ClientOptions {
    std::string host = "127.0.0.1";
    int port = 12300;
    std::string agent;
    std::string password;
    std::string behavior = "random_walker";
    uint64_t seed = 0;  // folded into the per-agent RNG
    int retries = 3;    // reconnect attempts after a lost connection
};

struct SessionLog {
    bool authenticated = false;
    bool completed = false;  // saw sim-end
    int percepts = 0;
    int actions = 0;
    long long final_score = -1;
    int ranking = 0;
    std::vector<std::string> notes;
};

// Connects, authenticates and answers every request-action with the chosen
// behavior until bye or connection loss (with bounded reconnects). The
// blackboard is shared by all agents of one team in this process.
SessionLog run_client(const ClientOptions& opts, TeamBlackboard& board);

}  // namespace gridsim
