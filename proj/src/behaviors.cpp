#include "gridsim/behaviors.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <queue>

#include "gridsim/world.hpp"

namespace gridsim {

void init_mind(AgentMind& mind, const SimStart& start, uint64_t seed) {
    mind.name = start.agent;
    mind.team = start.team;
    mind.vision = start.vision;
    mind.team_size = start.team_size;
    mind.rng = Rng(seed ^ fnv1a64(start.agent));
}

void register_agent(TeamBlackboard& board, const std::string& agent) {
    std::lock_guard lock(board.mu);
    if (board.anchor.empty() || agent < board.anchor) board.anchor = agent;
}

void observe(AgentMind& mind, const Percept& p, long long action_id) {
    mind.current_id = action_id;
    mind.step = p.step;
    mind.map.observe(p, mind.vision);

    mind.seen_things.clear();
    mind.seen_obstacles.clear();
    mind.seen_goal.clear();
    mind.seen_dispensers.clear();
    mind.seen_attached.clear();
    for (const PerceptThing& t : p.things) mind.seen_things[t.pos] = t;
    for (const PerceptTerrain& t : p.terrain) {
        (t.terrain == Terrain::Obstacle ? mind.seen_obstacles : mind.seen_goal).insert(t.pos);
    }
    for (const PerceptDispenser& d : p.dispensers) mind.seen_dispensers[d.pos] = d.block_type;
    for (Position a : p.attached) mind.seen_attached.insert(a);

    // anything ever sighted on a cell proves the cell is on the map; only
    // unproven cells can be the invisible border
    mind.proven.insert(mind.map.offset());
    for (const PerceptThing& t : p.things) mind.proven.insert(mind.map.offset() + t.pos);
    for (const PerceptTerrain& t : p.terrain) mind.proven.insert(mind.map.offset() + t.pos);
    for (const PerceptDispenser& d : p.dispensers) mind.proven.insert(mind.map.offset() + d.pos);
    for (Position m : p.markers) mind.proven.insert(mind.map.offset() + m);

    if (p.last_action && p.last_action->action.kind == ActionKind::Move) {
        mind.stuck = p.last_action->outcome == Outcome::Success ? 0 : mind.stuck + 1;
    }
    if (p.last_action && p.last_action->action.kind == ActionKind::Move &&
        p.last_action->outcome == Outcome::FailedPath && !p.disabled) {
        // the percept shows nothing on the refused cell: off the map, or a
        // blocker that slipped away this very step. Two bounces mark a wall;
        // the mark expires so a mistaken one heals, and real border re-marks
        // cost almost nothing.
        std::vector<Position> dests{offset_of(p.last_action->action.dir)};
        if (mind.holding) dests.push_back(dests[0] + offset_of(*mind.holding));
        for (Position rel : dests) {
            if (mind.seen_things.count(rel) || mind.seen_obstacles.count(rel)) continue;
            Position abs = mind.map.offset() + rel;
            // a proven cell was a passing blocker, dodge it briefly; an
            // unproven one is border rock worth remembering
            int ttl = mind.proven.count(abs) ? 8 : 150;
            if (++mind.bumps[abs] >= 2) mind.blocked[abs] = mind.step + ttl;
        }
    }
    Position here = mind.map.offset();
    if (here == mind.prev2 && here != mind.prev1) {
        ++mind.wobble;
    } else {
        mind.wobble = 0;
    }
    mind.prev2 = mind.prev1;
    mind.prev1 = here;
    if (p.last_action && p.last_action->action.kind == ActionKind::Attach &&
        p.last_action->outcome == Outcome::Success) {
        mind.holding = p.last_action->action.dir;
    }
    if (p.last_action && p.last_action->action.kind == ActionKind::Detach &&
        p.last_action->outcome == Outcome::Success) {
        mind.holding.reset();
    }
    if (p.last_action && p.last_action->action.kind == ActionKind::Rotate &&
        p.last_action->outcome == Outcome::Success && mind.holding) {
        int turn = p.last_action->action.rot == Rotation::Clockwise ? 1 : 3;
        mind.holding = static_cast<Direction>((static_cast<int>(*mind.holding) + turn) % 4);
    }
    if (mind.holding) {
        Position rel = offset_of(*mind.holding);
        auto it = mind.seen_things.find(rel);
        bool still_there = it != mind.seen_things.end() && it->second.kind == ThingKind::Block &&
                           mind.seen_attached.count(rel) > 0;
        if (p.disabled || !still_there) mind.holding.reset();
    }
}

namespace {

constexpr Direction kDirs[4] = {Direction::North, Direction::East, Direction::South,
                                Direction::West};

Direction turn_right(Direction d) {
    return kDirs[(static_cast<int>(d) + 1) % 4];
}

constexpr Position kNone{INT_MIN, INT_MIN};

// Whether the agent believes it can step onto the cell `rel` away. The two
// ignore cells (vacated by the agent's own component this move) pass. Fresh
// percept data wins; old thing sightings in the map are considered stale.
bool walkable(const AgentMind& mind, Position rel, Position ig0 = kNone, Position ig1 = kNone) {
    if (rel == ig0 || rel == ig1) return true;
    auto wall = mind.blocked.find(mind.map.offset() + rel);
    if (wall != mind.blocked.end() && wall->second > mind.step) return false;
    if (rel.manhattan() <= mind.vision) {
        if (mind.seen_obstacles.count(rel)) return false;
        auto it = mind.seen_things.find(rel);
        if (it != mind.seen_things.end()) {
            // a distant agent has likely wandered off by the time this cell
            // is reached; the parked anchor is the exception
            bool drifter = it->second.kind == ThingKind::Agent && rel.manhattan() >= 3 &&
                           !(mind.anchor_pos && rel == *mind.anchor_pos);
            if (!drifter) return false;
        }
        return true;
    }
    const MapCell* c = mind.map.at(mind.map.offset() + rel);
    return !c || c->terrain != Terrain::Obstacle;
}

// First move of a shortest path to `target` over the remembered map, unknown
// cells counting as open. With `held`, both the agent cell and the dragged
// block cell must be free along the way. The target cell itself may be
// occupied (landmarks like dispensers are approached, then handled from an
// adjacent cell). Empty when no known path exists.
std::optional<Direction> bfs_step(const AgentMind& mind, Position target,
                                  std::optional<Direction> held) {
    constexpr int kBound = 28;
    constexpr size_t kBudget = 4096;
    if (std::abs(target.x) > kBound || std::abs(target.y) > kBound) return std::nullopt;
    Position hold = held ? offset_of(*held) : Position{0, 0};
    auto arrived = [&](Position agent) { return agent + hold == target; };
    if (arrived({0, 0})) return std::nullopt;

    std::map<Position, Position> came;
    std::queue<Position> frontier;
    came[{0, 0}] = {0, 0};
    frontier.push({0, 0});
    std::optional<Position> goal;
    while (!frontier.empty() && came.size() < kBudget) {
        Position cur = frontier.front();
        frontier.pop();
        if (arrived(cur)) {
            goal = cur;
            break;
        }
        for (Direction d : kDirs) {
            Position next = cur + offset_of(d);
            if (std::abs(next.x) > kBound || std::abs(next.y) > kBound) continue;
            if (came.count(next)) continue;
            bool pass;
            if (held) {
                Position next_block = next + hold;
                pass = walkable(mind, next, Position{0, 0}, hold) &&
                       (next_block == target || walkable(mind, next_block, Position{0, 0}, hold));
            } else {
                pass = next == target || walkable(mind, next);
            }
            if (!pass) continue;
            came[next] = cur;
            frontier.push(next);
        }
    }
    if (!goal) return std::nullopt;
    Position cur = *goal;
    while (came.at(cur) != Position{0, 0}) cur = came.at(cur);
    return direction_between({0, 0}, cur);
}

// Boxed in on every side: burn a way out with clear. Obstacles go first,
// then loose blocks, attached blocks only as a last resort. A target that
// survives six attempts is border rock; move on to the next one.
Action dig_out(AgentMind& mind) {
    std::vector<Position> cands;
    for (Direction d : kDirs) {
        if (mind.seen_obstacles.count(offset_of(d))) cands.push_back(offset_of(d));
    }
    for (bool attached : {false, true}) {
        for (Direction d : kDirs) {
            Position n = offset_of(d);
            auto t = mind.seen_things.find(n);
            if (t != mind.seen_things.end() && t->second.kind == ThingKind::Block &&
                (mind.seen_attached.count(n) > 0) == attached) {
                cands.push_back(n);
            }
        }
    }
    if (cands.empty()) return Action::skip();
    if (std::find(cands.begin(), cands.end(), mind.dig_target) != cands.end() &&
        mind.clears_on_target < 6) {
        ++mind.clears_on_target;
        return Action::clear(mind.dig_target);
    }
    size_t at = 0;
    for (size_t i = 0; i < cands.size(); ++i) {
        if (cands[i] == mind.dig_target) at = (i + 1) % cands.size();
    }
    mind.dig_target = cands[at];
    mind.clears_on_target = 1;
    return Action::clear(mind.dig_target);
}

// No believed route to the target: advance on the straight line and burn
// through the first obstacle on it. Sealed pockets give way; border rock
// does not, so a cell that survives six attempts is abandoned.
Action tunnel_step(AgentMind& mind, Position target) {
    std::vector<std::pair<int, Direction>> order;
    for (Direction d : kDirs) order.emplace_back((target - offset_of(d)).manhattan(), d);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [dist, d] : order) {
        if (dist >= target.manhattan()) break;
        Position n = offset_of(d);
        if (walkable(mind, n)) return Action::move(d);
        bool rock = mind.seen_obstacles.count(n) > 0;
        if (!rock && n.manhattan() > mind.vision) {
            const MapCell* c = mind.map.at(mind.map.offset() + n);
            rock = c && c->terrain == Terrain::Obstacle;
        }
        if (!rock) continue;
        if (mind.dig_target == n && mind.clears_on_target >= 6) continue;
        if (mind.dig_target != n) {
            mind.dig_target = n;
            mind.clears_on_target = 0;
        }
        ++mind.clears_on_target;
        return Action::clear(n);
    }
    std::vector<Direction> open;
    for (Direction d : kDirs) {
        if (walkable(mind, offset_of(d))) open.push_back(d);
    }
    if (open.empty()) return dig_out(mind);
    return Action::move(
        open[static_cast<size_t>(mind.rng.uniform_int(0, static_cast<int>(open.size()) - 1))]);
}

// One greedy step toward a relative target; deterministic tie-break by
// direction order. Sustained ping-pong means the plan flips between equals
// every step; committing to one open direction for a few steps breaks the
// loop, where a fresh random roll each step would fall right back in.
Action walk_step(AgentMind& mind, Position target) {
    if (target == Position{0, 0}) return Action::skip();
    if (mind.step < mind.escape_until && walkable(mind, offset_of(mind.escape_dir))) {
        return Action::move(mind.escape_dir);
    }
    if (mind.wobble >= 4) {
        std::vector<Direction> open;
        for (Direction d : kDirs) {
            if (walkable(mind, offset_of(d))) open.push_back(d);
        }
        if (!open.empty()) {
            mind.escape_dir = open[static_cast<size_t>(
                mind.rng.uniform_int(0, static_cast<int>(open.size()) - 1))];
            mind.escape_until = mind.step + 5;
            mind.wobble = 0;
            return Action::move(mind.escape_dir);
        }
    }
    auto d = bfs_step(mind, target, std::nullopt);
    if (d) {
        if (walkable(mind, offset_of(*d))) return Action::move(*d);
    } else if (target.manhattan() > 2 && std::abs(target.x) <= 28 && std::abs(target.y) <= 28) {
        return tunnel_step(mind, target);
    }
    std::vector<std::pair<int, Direction>> ranked;
    for (Direction d : kDirs) {
        Position next = offset_of(d);
        if (!walkable(mind, next)) continue;
        ranked.emplace_back((target - next).manhattan(), d);
    }
    if (ranked.empty()) return dig_out(mind);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    // a dash of noise: pure greed ping-pongs forever in concave pockets
    if (mind.stuck >= 2 || mind.wobble >= 4 || mind.rng.chance(0.15)) {
        return Action::move(ranked[static_cast<size_t>(mind.rng.uniform_int(
                                       0, static_cast<int>(ranked.size()) - 1))]
                                .second);
    }
    return Action::move(ranked[0].second);
}

// First action of a shortest move/rotate sequence that lands the held block
// on `block_target`. Search states pair the agent cell with the side the
// block rides on; a rotation steps that side around the agent when the
// swept-to cell is free. Slotting a block into a pocket usually needs one
// such rotation, which plain translation search cannot express.
std::optional<Action> plan_component_step(const AgentMind& mind, Direction held,
                                          Position block_target) {
    constexpr int kBound = 28;
    constexpr size_t kBudget = 8192;
    if (std::abs(block_target.x) > kBound || std::abs(block_target.y) > kBound) {
        return std::nullopt;
    }
    Position hold0 = offset_of(held);
    using State = std::array<int, 3>;  // agent x, agent y, held direction index
    State start{0, 0, static_cast<int>(held)};
    auto arrived = [&](const State& s) {
        return Position{s[0], s[1]} + offset_of(kDirs[s[2]]) == block_target;
    };
    std::map<State, State> came;
    std::queue<State> frontier;
    came[start] = start;
    frontier.push(start);
    std::optional<State> goal;
    while (!frontier.empty() && came.size() < kBudget) {
        State cur = frontier.front();
        frontier.pop();
        if (arrived(cur)) {
            goal = cur;
            break;
        }
        Position pos{cur[0], cur[1]};
        Position hoff = offset_of(kDirs[cur[2]]);
        for (Direction d : kDirs) {
            Position next = pos + offset_of(d);
            if (std::abs(next.x) > kBound || std::abs(next.y) > kBound) continue;
            State ns{next.x, next.y, cur[2]};
            if (came.count(ns)) continue;
            Position nb = next + hoff;
            if (!walkable(mind, next, {0, 0}, hold0)) continue;
            if (!walkable(mind, nb, {0, 0}, hold0)) continue;
            came[ns] = cur;
            frontier.push(ns);
        }
        for (int turn : {1, 3}) {
            State ns{pos.x, pos.y, (cur[2] + turn) % 4};
            if (came.count(ns)) continue;
            Position nb = pos + offset_of(kDirs[ns[2]]);
            if (!walkable(mind, nb, {0, 0}, hold0)) continue;
            came[ns] = cur;
            frontier.push(ns);
        }
    }
    if (!goal) return std::nullopt;
    State cur = *goal;
    while (came.at(cur) != start) cur = came.at(cur);
    if (cur[0] == 0 && cur[1] == 0) {
        int dh = (cur[2] - start[2] + 4) % 4;
        return Action::rotate(dh == 1 ? Rotation::Clockwise : Rotation::CounterClockwise);
    }
    if (auto d = direction_between({0, 0}, Position{cur[0], cur[1]})) return Action::move(*d);
    return std::nullopt;
}

// Step for an agent dragging one block on side `held`, steering the block
// toward `block_target`. Planned when possible, greedy with a rotation
// fallback when the plan goes stale against live traffic.
Action walk_component_step(AgentMind& mind, Direction held, Position block_target) {
    Position block = offset_of(held);
    if (block == block_target) return Action::skip();
    if (mind.stuck < 2) {
        if (auto a = plan_component_step(mind, held, block_target)) {
            if (mind.wobble < 4 || !mind.rng.chance(0.5)) return *a;
        }
    }
    std::vector<std::pair<int, Direction>> ranked;
    for (Direction d : kDirs) {
        Position agent_dest = offset_of(d);
        Position block_dest = block + offset_of(d);
        if (!walkable(mind, agent_dest, block)) continue;
        if (!walkable(mind, block_dest, Position{0, 0})) continue;
        ranked.emplace_back((block_target - block_dest).manhattan(), d);
    }
    if (mind.stuck >= 3 || ranked.empty()) {
        if (walkable(mind, block.clockwise())) return Action::rotate(Rotation::Clockwise);
        if (walkable(mind, block.counterclockwise())) {
            return Action::rotate(Rotation::CounterClockwise);
        }
        if (ranked.empty()) return dig_out(mind);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (mind.stuck >= 2 || mind.wobble >= 4) {
        return Action::move(ranked[static_cast<size_t>(mind.rng.uniform_int(
                                       0, static_cast<int>(ranked.size()) - 1))]
                                .second);
    }
    return Action::move(ranked[0].second);
}

// The nearest unexplored spot on a coarse lattice around the agent, so
// wandering turns into coverage. Empty once everything nearby is mapped.
std::optional<Position> frontier_target(AgentMind& mind) {
    Position self = mind.map.offset();
    for (int r = 6; r <= 42; r += 6) {
        std::vector<Position> ring;
        for (int dx = -r; dx <= r; dx += 6) {
            for (int dy = -r; dy <= r; dy += 6) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                Position cand = self + Position{dx, dy};
                if (!mind.map.at(cand)) ring.push_back(cand);
            }
        }
        if (!ring.empty()) {
            return ring[static_cast<size_t>(
                mind.rng.uniform_int(0, static_cast<int>(ring.size()) - 1))];
        }
    }
    return std::nullopt;
}

// Wanders toward unexplored territory, or a random waypoint once the map is
// saturated. Honors a held block.
Action roam(AgentMind& mind) {
    Position self = mind.map.offset();
    ++mind.waypoint_age;
    if (!mind.waypoint || *mind.waypoint == self || mind.stuck >= 4 || mind.waypoint_age > 24) {
        mind.waypoint = frontier_target(mind);
        if (!mind.waypoint) {
            mind.waypoint = Position{self.x + mind.rng.uniform_int(-14, 14),
                                     self.y + mind.rng.uniform_int(-14, 14)};
        }
        mind.stuck = 0;
        mind.waypoint_age = 0;
    }
    Action a = mind.holding ? walk_component_step(mind, *mind.holding, *mind.waypoint - self)
                            : walk_step(mind, *mind.waypoint - self);
    if (a.kind == ActionKind::Skip) mind.waypoint.reset();
    return a;
}

// Nearest remembered cell satisfying `pred`, as a relative position.
template <typename Pred>
std::optional<Position> nearest_cell(const AgentMind& mind, Pred pred) {
    std::optional<Position> best;
    int best_dist = 0;
    for (const auto& [pos, cell] : mind.map.cells()) {
        if (!pred(cell, pos)) continue;
        Position rel = pos - mind.map.offset();
        int dist = rel.manhattan();
        if (!best || dist < best_dist) {
            best = rel;
            best_dist = dist;
        }
    }
    return best;
}

// --- random_walker ------------------------------------------------------

Action random_walker(const Percept& p, AgentMind& mind, TeamBlackboard&) {
    if (p.disabled) return Action::skip();
    std::vector<Direction> options;
    for (Direction d : kDirs) {
        if (walkable(mind, offset_of(d))) options.push_back(d);
    }
    if (options.empty()) return Action::skip();
    return Action::move(
        options[static_cast<size_t>(mind.rng.uniform_int(0, static_cast<int>(options.size()) - 1))]);
}

// --- explorer_digger ----------------------------------------------------

// Walks a straight heading and charges clear at any obstacle in the way;
// turns away from walls that survive a full charge (the border ring).
Action explorer_digger(const Percept& p, AgentMind& mind, TeamBlackboard&) {
    if (p.disabled) return Action::skip();
    if (!mind.has_heading) {
        mind.heading = kDirs[mind.rng.uniform_int(0, 3)];
        mind.has_heading = true;
    }
    Position ahead = offset_of(mind.heading);
    if (mind.seen_obstacles.count(ahead)) {
        if (mind.dig_target != ahead) {
            mind.dig_target = ahead;
            mind.clears_on_target = 0;
        }
        if (mind.clears_on_target >= 6) {
            mind.heading = turn_right(mind.heading);
            mind.clears_on_target = 0;
            return Action::skip();
        }
        ++mind.clears_on_target;
        return Action::clear(ahead);
    }
    mind.clears_on_target = 0;
    if (mind.seen_things.count(ahead) || mind.stuck >= 2 || mind.rng.chance(0.05)) {
        mind.heading = kDirs[mind.rng.uniform_int(0, 3)];
        mind.stuck = 0;
    }
    if (walkable(mind, offset_of(mind.heading))) return Action::move(mind.heading);
    return Action::skip();
}

// --- assembler_pair -----------------------------------------------------

void reset_task(TeamBlackboard& board) {
    board.task_name.clear();
    board.task_deadline = 0;
    board.reqs.clear();
    board.pred.clear();
    board.claimed.clear();
    board.filled.clear();
    board.handshake.reset();
}

// Orders the requirements so every cell touches the origin or an earlier
// cell; the shape generator guarantees such an order exists.
void adopt_task(TeamBlackboard& board, const Task& t) {
    reset_task(board);
    board.task_name = t.name;
    board.task_deadline = t.deadline;
    std::map<Position, Requirement> remaining;
    for (const Requirement& r : t.requirements) remaining[r.pos] = r;
    std::queue<std::pair<Position, int>> frontier;
    frontier.push({{0, 0}, -1});
    while (!frontier.empty()) {
        auto [pos, idx] = frontier.front();
        frontier.pop();
        for (Direction d : kDirs) {
            Position n = pos + offset_of(d);
            auto it = remaining.find(n);
            if (it == remaining.end()) continue;
            board.reqs.push_back(it->second);
            board.pred.push_back(idx);
            remaining.erase(it);
            frontier.push({n, static_cast<int>(board.reqs.size()) - 1});
        }
    }
    board.claimed.assign(board.reqs.size(), "");
    board.filled.assign(board.reqs.size(), false);
}

// Cells the anchor needs free around its parking spot.
constexpr Position kShapeRoom[4] = {{0, 1}, {0, 2}, {1, 1}, {-1, 1}};

bool room_below(const AgentMind& mind, Position goal_rel) {
    for (Position off : kShapeRoom) {
        Position rel = goal_rel + off;
        if (rel.manhattan() <= mind.vision) {
            if (mind.seen_obstacles.count(rel) || mind.seen_dispensers.count(rel)) return false;
        } else {
            const MapCell* c = mind.map.at(mind.map.offset() + rel);
            if (c && (c->terrain == Terrain::Obstacle || c->has_dispenser)) return false;
        }
    }
    return true;
}

const Task* find_task(const Percept& p, const std::string& name) {
    for (const Task& t : p.tasks) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

Action anchor_logic(const Percept& p, AgentMind& mind, TeamBlackboard& board) {
    if (std::getenv("GRIDSIM_TRACE") && mind.step % 10 == 0) {
        std::string filled, claims;
        for (size_t i = 0; i < board.filled.size(); ++i) {
            filled += board.filled[i] ? '1' : '0';
            claims += (board.claimed[i].empty() ? "-" : board.claimed[i]) + std::string(",");
        }
        std::fprintf(stderr, "[%d] BOARD anchor=%s@(%d,%d) ready=%d task=%s dl=%d filled=%s claims=%s hs=%s\n",
                     mind.step, mind.name.c_str(), mind.map.offset().x, mind.map.offset().y,
                     (int)board.anchor_ready,
                     board.task_name.c_str(), board.task_deadline, filled.c_str(), claims.c_str(),
                     board.handshake
                         ? (board.handshake->carrier + "/r" + std::to_string(board.handshake->req) +
                            "/id" + std::to_string(board.handshake->connect_id) + "/post" +
                            std::to_string(board.handshake->posted_id))
                               .c_str()
                         : "none");
    }
    if (p.disabled) return Action::skip();

    // parking
    if (!board.anchor_ready) {
        if (mind.seen_goal.count({0, 0}) && room_below(mind, {0, 0})) {
            board.anchor_ready = true;
        } else {
            std::optional<Position> best;
            for (Position g : mind.seen_goal) {
                if (!room_below(mind, g)) continue;
                if (!best || g.manhattan() < best->manhattan()) best = g;
            }
            if (!best) {
                best = nearest_cell(mind, [](const MapCell& c, Position) {
                    return c.terrain == Terrain::Goal;
                });
            }
            return best ? walk_step(mind, *best) : roam(mind);
        }
    }

    // settle last step's outcome
    if (p.last_action) {
        const Action& la = p.last_action->action;
        bool ok = p.last_action->outcome == Outcome::Success;
        if (la.kind == ActionKind::Attach && ok) {
            mind.roots.insert(offset_of(la.dir));
            for (size_t i = 0; i < board.reqs.size(); ++i) {
                if (board.reqs[i].pos == offset_of(la.dir)) board.filled[i] = true;
            }
        } else if (la.kind == ActionKind::Detach &&
                   (ok || p.last_action->outcome == Outcome::FailedTarget)) {
            mind.roots.erase(offset_of(la.dir));
        } else if (la.kind == ActionKind::Connect && board.handshake &&
                   board.handshake->connect_id == mind.current_id - 1) {
            if (ok) {
                board.filled[static_cast<size_t>(board.handshake->req)] = true;
                board.claimed[static_cast<size_t>(board.handshake->req)].clear();
            }
            board.handshake.reset();
        } else if (la.kind == ActionKind::Submit && ok) {
            mind.roots.clear();
            reset_task(board);
        }
    }

    // keep the chosen task alive; pick small shapes with the longest runway,
    // a fresh team burns most of the clock just converging on the zone
    if (!board.task_name.empty() && !find_task(p, board.task_name)) reset_task(board);
    if (board.task_name.empty()) {
        const Task* best = nullptr;
        const Task* fallback = nullptr;
        auto better = [](const Task& t, const Task* cur) {
            return !cur || t.requirements.size() < cur->requirements.size() ||
                   (t.requirements.size() == cur->requirements.size() &&
                    (t.deadline > cur->deadline ||
                     (t.deadline == cur->deadline && t.name < cur->name)));
        };
        for (const Task& t : p.tasks) {
            if (better(t, fallback)) fallback = &t;
            if (t.deadline - p.step >= 120 && better(t, best)) best = &t;
        }
        if (!best) best = fallback;  // a tight deadline still beats an idle team
        if (!best) return Action::skip();
        adopt_task(board, *best);
    }

    // ground-truth refresh: a secured cell must still show the right block,
    // and a block already riding on this agent at a requirement cell counts
    // as delivered without another attach
    for (size_t i = 0; i < board.reqs.size(); ++i) {
        auto it = mind.seen_things.find(board.reqs[i].pos);
        bool right = it != mind.seen_things.end() && it->second.kind == ThingKind::Block &&
                     it->second.detail == board.reqs[i].block_type;
        if (board.filled[i] && !right) board.filled[i] = false;
        if (!board.filled[i] && right && mind.roots.count(board.reqs[i].pos)) {
            board.filled[i] = true;
        }
    }

    // handshake bookkeeping
    if (board.handshake) {
        auto& hs = *board.handshake;
        if (hs.connect_id == -1) {
            size_t req = static_cast<size_t>(hs.req);
            auto it = mind.seen_things.find(board.reqs[req].pos);
            bool deliverable = it != mind.seen_things.end() &&
                               it->second.kind == ThingKind::Block &&
                               it->second.detail == board.reqs[req].block_type &&
                               board.pred[req] >= 0 &&
                               board.filled[static_cast<size_t>(board.pred[req])];
            if (deliverable) {
                hs.connect_id = mind.current_id + 1;
            } else if (mind.current_id - hs.posted_id > 12) {
                board.handshake.reset();
            }
        }
    }

    // act: fire a due connect first, then attach, shed leftovers, submit,
    // clean debris
    if (board.handshake && board.handshake->connect_id == mind.current_id) {
        return Action::connect(board.handshake->carrier, board.handshake->anchor_block);
    }
    for (size_t i = 0; i < board.reqs.size(); ++i) {
        if (board.filled[i] || board.pred[i] != -1) continue;
        if (mind.roots.count(board.reqs[i].pos)) continue;
        auto it = mind.seen_things.find(board.reqs[i].pos);
        if (it != mind.seen_things.end() && it->second.kind == ThingKind::Block &&
            it->second.detail == board.reqs[i].block_type) {
            if (auto d = direction_between({0, 0}, board.reqs[i].pos)) return Action::attach(*d);
        }
    }
    // structure left over from an abandoned task blocks the new shape and
    // makes this agent look laden; cut it loose
    for (Position r : mind.roots) {
        bool wanted = false;
        for (size_t i = 0; i < board.reqs.size(); ++i) {
            if (board.reqs[i].pos != r) continue;
            auto it = mind.seen_things.find(r);
            if (it != mind.seen_things.end() && it->second.kind == ThingKind::Block &&
                it->second.detail == board.reqs[i].block_type) {
                wanted = true;
            }
        }
        if (!wanted) {
            if (auto d = direction_between({0, 0}, r)) return Action::detach(*d);
            mind.roots.erase(r);
            break;
        }
    }
    if (!board.filled.empty() &&
        std::all_of(board.filled.begin(), board.filled.end(), [](bool f) { return f; })) {
        return Action::submit(board.task_name);
    }
    for (size_t i = 0; i < board.reqs.size(); ++i) {
        if (board.filled[i]) continue;
        auto it = mind.seen_things.find(board.reqs[i].pos);
        if (it == mind.seen_things.end() || it->second.kind != ThingKind::Block) continue;
        // attached blocks are deliveries in someone's hands; loose ones are
        // junk squatting on the footprint (usable loose blocks were adopted
        // by the attach pass above)
        if (mind.seen_attached.count(board.reqs[i].pos)) continue;
        return Action::clear(board.reqs[i].pos);
    }
    return Action::skip();
}

// tour the known goal zones looking for the parked anchor: watch each zone
// from beside it for a while, then write it off for a spell and try the next
Action tour_zones(AgentMind& mind, const TeamBlackboard& board) {
    if (!board.anchor_ready) return roam(mind);
    std::optional<Position> g = nearest_cell(mind, [&](const MapCell& c, Position abs) {
        auto mark = mind.searched_goals.find(abs);
        return c.terrain == Terrain::Goal &&
               (mark == mind.searched_goals.end() || mark->second <= mind.step);
    });
    if (!g) return roam(mind);
    if (g->manhattan() <= 2) {
        if (++mind.zone_wait > 8) {
            Position center = mind.map.offset() + *g;
            for (const auto& [abs, cell] : mind.map.cells()) {
                if (cell.terrain == Terrain::Goal && manhattan(abs, center) <= 8) {
                    mind.searched_goals[abs] = mind.step + 120;
                }
            }
            mind.zone_wait = 0;
            return roam(mind);
        }
        // loitering on goal terrain reads as an anchor to teammates; observe
        // from a plain cell next to the zone instead
        if (mind.seen_goal.count({0, 0})) {
            Position hold = mind.holding ? offset_of(*mind.holding) : kNone;
            for (Direction d : kDirs) {
                Position an = offset_of(d);
                if (mind.seen_goal.count(an)) continue;
                if (!walkable(mind, an, {0, 0}, hold)) continue;
                if (mind.holding && !walkable(mind, an + hold, {0, 0}, hold)) continue;
                return Action::move(d);
            }
        }
        return Action::skip();
    }
    mind.zone_wait = 0;
    return mind.holding ? walk_component_step(mind, *mind.holding, *g) : walk_step(mind, *g);
}

Action carrier_logic(const Percept& p, AgentMind& mind, TeamBlackboard& board) {
    if (std::getenv("GRIDSIM_TRACE") && (mind.step % 25 == 0 || std::getenv("GRIDSIM_TRACE_ALL"))) {
        std::fprintf(stderr,
                     "[%d] %s pos=(%d,%d) claim=%d holding=%d anchor=%d ready=%d task=%s "
                     "wait=%d searched=%zu\n",
                     mind.step, mind.name.c_str(), mind.map.offset().x, mind.map.offset().y,
                     mind.claim, mind.holding.has_value(), mind.anchor_pos.has_value(),
                     (int)board.anchor_ready, board.task_name.c_str(), mind.zone_wait,
                     mind.searched_goals.size());
    }
    if (p.disabled) return Action::skip();

    // a connect that just succeeded: let go of the block, it belongs to the
    // anchor's structure now
    if (p.last_action && p.last_action->action.kind == ActionKind::Connect &&
        p.last_action->outcome == Outcome::Success && mind.holding) {
        if (mind.claim >= 0 && static_cast<size_t>(mind.claim) < board.claimed.size()) {
            board.claimed[static_cast<size_t>(mind.claim)].clear();
        }
        mind.claim = -1;
        return Action::detach(*mind.holding);
    }

    // fire a scheduled connect
    if (board.handshake && board.handshake->carrier == mind.name &&
        board.handshake->connect_id == mind.current_id && mind.holding) {
        return Action::connect(board.anchor, board.handshake->carrier_block);
    }

    // anchor tracking: an own-team agent holding still on a goal cell. A
    // remembered anchor whose cell is in view but vacant was a mirage
    // (another carrier pausing mid-route); forget it and keep looking.
    if (board.anchor_ready) {
        if (mind.anchor_pos) {
            Position rel = *mind.anchor_pos - mind.map.offset();
            if (rel == Position{0, 0}) {
                mind.anchor_pos.reset();
            } else if (rel.manhattan() <= mind.vision) {
                auto it = mind.seen_things.find(rel);
                if (it == mind.seen_things.end() || it->second.kind != ThingKind::Agent ||
                    it->second.detail != mind.team) {
                    mind.anchor_pos.reset();
                }
            }
        }
        if (!mind.anchor_pos) {
            bool underway =
                std::any_of(board.filled.begin(), board.filled.end(), [](bool f) { return f; });
            std::optional<Position> candidate;
            for (const auto& [rel, thing] : mind.seen_things) {
                if (rel == Position{0, 0} || thing.kind != ThingKind::Agent) continue;
                if (thing.detail != mind.team || !mind.seen_goal.count(rel)) continue;
                // before the first attach the anchor carries nothing; a
                // block-laden agent idling on the zone is a carrier
                if (!underway && mind.seen_attached.count(rel)) continue;
                Position abs = mind.map.offset() + rel;
                if (mind.anchor_watch && *mind.anchor_watch == abs) {
                    candidate = rel;
                    break;
                }
                if (!candidate) candidate = rel;
            }
            if (candidate) {
                Position abs = mind.map.offset() + *candidate;
                if (mind.anchor_watch && *mind.anchor_watch == abs &&
                    mind.step == mind.watch_step + 1) {
                    if (++mind.watch_hits >= 3) mind.anchor_pos = abs;
                } else {
                    mind.anchor_watch = abs;
                    mind.watch_hits = 1;
                }
                mind.watch_step = mind.step;
            }
        }
    }

    // claim maintenance: only hold a requirement whose block type this agent
    // can source, either from cargo in hand or a dispenser it has mapped
    auto sourced = [&](const std::string& type) {
        if (mind.holding) {
            auto held = mind.seen_things.find(offset_of(*mind.holding));
            if (held != mind.seen_things.end() && held->second.detail == type) return true;
        }
        for (const auto& [abs, cell] : mind.map.cells()) {
            if (cell.has_dispenser && cell.dispenser_type == type) return true;
        }
        return false;
    };
    if (mind.claim >= 0) {
        bool valid = !board.task_name.empty() && mind.claim_task == board.task_name &&
                     static_cast<size_t>(mind.claim) < board.reqs.size() &&
                     !board.filled[static_cast<size_t>(mind.claim)] &&
                     board.claimed[static_cast<size_t>(mind.claim)] == mind.name &&
                     sourced(board.reqs[static_cast<size_t>(mind.claim)].block_type);
        if (!valid) {
            if (!board.task_name.empty() && static_cast<size_t>(mind.claim) < board.claimed.size() &&
                board.claimed[static_cast<size_t>(mind.claim)] == mind.name) {
                board.claimed[static_cast<size_t>(mind.claim)].clear();
            }
            mind.claim = -1;
        }
    }
    if (mind.claim < 0 && !board.task_name.empty() && mind.anchor_pos) {
        for (size_t i = 0; i < board.reqs.size(); ++i) {
            if (!board.filled[i] && board.claimed[i].empty() && sourced(board.reqs[i].block_type)) {
                board.claimed[i] = mind.name;
                mind.claim = static_cast<int>(i);
                mind.claim_task = board.task_name;
                break;
            }
        }
    }
    // work the shape root-first: a child block cannot land before its parent,
    // so trade the claim up the chain while the parent sits orphaned. Keep the
    // trade only if cargo in hand stays useful.
    while (mind.claim >= 0) {
        int pr = board.pred[static_cast<size_t>(mind.claim)];
        if (pr < 0 || board.filled[static_cast<size_t>(pr)] ||
            !board.claimed[static_cast<size_t>(pr)].empty() ||
            !sourced(board.reqs[static_cast<size_t>(pr)].block_type)) {
            break;
        }
        if (mind.holding) {
            auto held = mind.seen_things.find(offset_of(*mind.holding));
            if (held == mind.seen_things.end() ||
                held->second.detail != board.reqs[static_cast<size_t>(pr)].block_type) {
                break;
            }
        }
        board.claimed[static_cast<size_t>(mind.claim)].clear();
        board.claimed[static_cast<size_t>(pr)] = mind.name;
        mind.claim = pr;
    }
    if (mind.claim < 0) {
        if (mind.holding) return Action::detach(*mind.holding);  // cargo nobody needs
        if (!mind.anchor_pos) return tour_zones(mind, board);
        return roam(mind);
    }
    const Requirement req = board.reqs[static_cast<size_t>(mind.claim)];

    // cargo
    if (mind.holding) {
        const PerceptThing& cargo = mind.seen_things.at(offset_of(*mind.holding));
        if (cargo.detail != req.block_type) return Action::detach(*mind.holding);
    } else {
        if (std::getenv("GRIDSIM_TRACE") && (mind.step % 25 == 0 || std::getenv("GRIDSIM_TRACE_ALL"))) {
            std::optional<Position> nd = nearest_cell(mind, [&](const MapCell& c, Position) {
                return c.has_dispenser && c.dispenser_type == req.block_type;
            });
            std::fprintf(stderr,
                         "[%d] %s FETCH req=%d type=%s disp=(%d,%d) last=%s/%s stuck=%d "
                         "nesw=%d%d%d%d blocked=%zu wob=%d at=(%d,%d)\n",
                         mind.step, mind.name.c_str(), mind.claim, req.block_type.c_str(),
                         nd ? nd->x : 999, nd ? nd->y : 999,
                         p.last_action ? std::string(name_of(p.last_action->action.kind)).c_str()
                                       : "none",
                         p.last_action ? std::string(name_of(p.last_action->outcome)).c_str() : "-",
                         mind.stuck, (int)walkable(mind, {0, -1}), (int)walkable(mind, {1, 0}),
                         (int)walkable(mind, {0, 1}), (int)walkable(mind, {-1, 0}),
                         mind.blocked.size(), mind.wobble, mind.map.offset().x,
                         mind.map.offset().y);
            std::string around;
            for (Position n : {Position{0, -1}, Position{1, 0}, Position{0, 1}, Position{-1, 0}}) {
                if (mind.seen_obstacles.count(n)) {
                    around += 'O';
                } else if (auto t = mind.seen_things.find(n); t != mind.seen_things.end()) {
                    around += t->second.kind == ThingKind::Agent ? 'A' : 'B';
                    around += mind.seen_attached.count(n) ? '+' : '-';
                } else {
                    around += '.';
                }
            }
            std::fprintf(stderr, "    %s around=%s\n", mind.name.c_str(), around.c_str());
        }
        for (Direction d : kDirs) {
            Position rel = offset_of(d);
            auto disp = mind.seen_dispensers.find(rel);
            if (disp == mind.seen_dispensers.end() || disp->second != req.block_type) continue;
            auto thing = mind.seen_things.find(rel);
            if (thing == mind.seen_things.end()) return Action::request(d);
            if (thing->second.kind == ThingKind::Block &&
                thing->second.detail == req.block_type && !mind.seen_attached.count(rel)) {
                return Action::attach(d);
            }
            // someone else's thing covers the outlet; try another one for a
            // while instead of crowding here
            mind.busy_dispensers[mind.map.offset() + rel] = mind.step + 30;
            return roam(mind);
        }
        std::optional<Position> disp = nearest_cell(mind, [&](const MapCell& c, Position abs) {
            auto busy = mind.busy_dispensers.find(abs);
            return c.has_dispenser && c.dispenser_type == req.block_type &&
                   (busy == mind.busy_dispensers.end() || busy->second <= mind.step);
        });
        if (!disp) {
            disp = nearest_cell(mind, [&](const MapCell& c, Position) {
                return c.has_dispenser && c.dispenser_type == req.block_type;
            });
        }
        if (!disp) return roam(mind);
        return walk_step(mind, *disp);  // stops next to it; the loop above takes over
    }

    // cargo in hand but the anchor's whereabouts unknown: resume the tour
    if (!mind.anchor_pos) return tour_zones(mind, board);

    // delivery
    Position anchor_rel = *mind.anchor_pos - mind.map.offset();
    Position block_target = anchor_rel + req.pos;
    Position block_rel = offset_of(*mind.holding);
    if (std::getenv("GRIDSIM_TRACE") && (mind.step % 25 == 0 || std::getenv("GRIDSIM_TRACE_ALL"))) {
        std::fprintf(stderr,
                     "[%d] %s DELIVER anchor_rel=(%d,%d) block_target=(%d,%d) block=(%d,%d) "
                     "last=%s/%s stuck=%d\n",
                     mind.step, mind.name.c_str(), anchor_rel.x, anchor_rel.y, block_target.x,
                     block_target.y, block_rel.x, block_rel.y,
                     p.last_action ? std::string(name_of(p.last_action->action.kind)).c_str()
                                   : "none",
                     p.last_action ? std::string(name_of(p.last_action->outcome)).c_str() : "-",
                     mind.stuck);
    }
    // a child block cannot land before its parent; loitering on the footprint
    // meanwhile gridlocks the carrier whose turn it actually is
    int pr = board.pred[static_cast<size_t>(mind.claim)];
    if (pr >= 0 && !board.filled[static_cast<size_t>(pr)]) {
        if (block_target.manhattan() > 8) {
            return walk_component_step(mind, *mind.holding, block_target);
        }
        if (anchor_rel.manhattan() < 4) {
            std::optional<Direction> out;
            int best = anchor_rel.manhattan();
            for (Direction d : kDirs) {
                Position step = offset_of(d);
                if (!walkable(mind, step, block_rel)) continue;
                if (!walkable(mind, block_rel + step, Position{0, 0})) continue;
                int dist = (anchor_rel - step).manhattan();
                if (dist > best) {
                    best = dist;
                    out = d;
                }
            }
            if (out) return Action::move(*out);
        }
        return Action::skip();
    }
    if (block_rel != block_target) return walk_component_step(mind, *mind.holding, block_target);

    if (board.pred[static_cast<size_t>(mind.claim)] == -1) {
        // origin-adjacent cell: drop the block, the anchor attaches it
        board.claimed[static_cast<size_t>(mind.claim)].clear();
        mind.claim = -1;
        return Action::detach(*mind.holding);
    }
    if (!board.handshake) {
        board.handshake = TeamBlackboard::Handshake{
            mind.name, mind.claim, block_rel,
            board.reqs[static_cast<size_t>(board.pred[static_cast<size_t>(mind.claim)])].pos, -1,
            mind.current_id};
    }
    return Action::skip();  // hold position while the handshake is pending
}

Action assembler_pair(const Percept& p, AgentMind& mind, TeamBlackboard& board) {
    std::lock_guard lock(board.mu);
    if (!board.anchor_ready) {
        // default elect walks to a zone, but the first teammate to stand
        // inside a usable zone empty-handed takes the role outright
        if (board.anchor.empty() || mind.name < board.anchor) board.anchor = mind.name;
        if (!mind.holding && mind.seen_goal.count({0, 0}) && room_below(mind, {0, 0})) {
            board.anchor = mind.name;
            board.anchor_ready = true;
        }
    }
    if (mind.name == board.anchor) return anchor_logic(p, mind, board);
    return carrier_logic(p, mind, board);
}

}  // namespace

BehaviorFn behavior_from(const std::string& name) {
    if (name == "random_walker") return random_walker;
    if (name == "explorer_digger") return explorer_digger;
    if (name == "assembler_pair") return assembler_pair;
    return nullptr;
}

std::vector<std::string> behavior_names() {
    return {"random_walker", "explorer_digger", "assembler_pair"};
}

}  // namespace gridsim
