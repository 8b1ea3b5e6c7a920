#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridsim/client.hpp"
#include "gridsim/perception.hpp"
#include "gridsim/protocol.hpp"
#include "gridsim/rng.hpp"
#include "gridsim/tasks.hpp"

namespace gridsim {

// Shared memory of one team's agents within one client process. Guarded by
// `mu` because network clients answer on one thread per agent.
struct TeamBlackboard {
    std::mutex mu;

    std::string anchor;  // lexicographically first registered agent
    bool anchor_ready = false;

    // the task the team is assembling, requirements in fill order: reqs[0]
    // is origin-adjacent, every later cell touches an earlier one
    std::string task_name;
    long long task_deadline = 0;
    std::vector<Requirement> reqs;
    std::vector<int> pred;  // index of the touching earlier cell, -1 for reqs[0]
    std::vector<std::string> claimed;
    std::vector<bool> filled;

    // at most one block-to-block connect in flight per team
    struct Handshake {
        std::string carrier;
        int req = -1;
        Position carrier_block;     // relative to the carrier
        Position anchor_block;      // relative to the anchor
        long long connect_id = -1;  // action id both sides fire at; -1 until accepted
        long long posted_id = -1;
    };
    std::optional<Handshake> handshake;
};

// One agent's client-side state across steps.
struct AgentMind {
    std::string name;
    std::string team;
    int vision = 5;
    int team_size = 0;
    Rng rng{1};
    LocalMap map;

    long long current_id = 0;  // action id being answered
    int step = -1;

    // per-step caches rebuilt by observe(); positions relative to the agent
    std::map<Position, PerceptThing> seen_things;
    std::set<Position> seen_obstacles;
    std::set<Position> seen_goal;
    std::map<Position, std::string> seen_dispensers;
    std::set<Position> seen_attached;

    // explorer_digger
    Direction heading = Direction::North;
    bool has_heading = false;
    int clears_on_target = 0;
    Position dig_target{};

    // assembler
    std::optional<Direction> holding;      // side of the carried block
    std::optional<Position> anchor_pos;    // anchor cell in this map's frame
    std::optional<Position> anchor_watch;  // stationarity candidate
    int watch_step = -1;
    int watch_hits = 0;
    std::map<Position, int> searched_goals;  // anchorless goal cell -> step the mark expires
    std::set<Position> roots;                // blocks attached directly to this agent
    std::map<Position, int> bumps;           // failed moves into seemingly open cells
    std::map<Position, int> blocked;         // invisibly refused cell -> step the mark expires
    std::set<Position> proven;               // cells that ever showed content: in bounds for sure
    std::map<Position, int> busy_dispensers;  // crowded dispenser -> step the mark expires
    Position prev1{0, 0};                    // positions one and two steps back,
    Position prev2{0, 0};                    // for spotting ping-pong walking
    int wobble = 0;
    Direction escape_dir = Direction::North;  // committed direction that breaks
    int escape_until = -1;                    // a ping-pong loop, and until when
    int zone_wait = 0;
    int claim = -1;  // requirement index being delivered
    std::string claim_task;
    int stuck = 0;  // consecutive failed moves
    std::optional<Position> waypoint;
    int waypoint_age = 0;
};

// Fills sim-start facts and seeds the agent's RNG deterministically from the
// match seed and the agent name.
void init_mind(AgentMind& mind, const SimStart& start, uint64_t seed);

// Elects the anchor: the lexicographically smallest registered name.
void register_agent(TeamBlackboard& board, const std::string& agent);

// Dead reckoning, map integration and the per-step percept caches. Call once
// per request-action before the behavior.
void observe(AgentMind& mind, const Percept& p, long long action_id);

using BehaviorFn = Action (*)(const Percept&, AgentMind&, TeamBlackboard&);

// nullptr for unknown names
BehaviorFn behavior_from(const std::string& name);
std::vector<std::string> behavior_names();

}  // namespace gridsim
