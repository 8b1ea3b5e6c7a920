#pragma once

#include <map>
#include <string>
#include <vector>

#include "gridsim/config.hpp"
#include "gridsim/server.hpp"
#include "json.hpp"

namespace gridsim {

struct SimAssignment {
    int index = 0;  // position in the schedule, 0-based
    std::string team_a;
    std::string team_b;
    int param_set = 1;
    SimConfig config;  // resolved: both teams, parameter set, per-sim seed
};

// Every unordered team pair plays once per parameter set (1, 2, 3), seeds
// running base.seed, base.seed + 1, ... in schedule order. Throws
// std::invalid_argument for fewer than two teams.
std::vector<SimAssignment> schedule(const SimConfig& base, std::vector<std::string> teams);

struct TeamStanding {
    std::string team;
    int played = 0;
    int wins = 0;
    int draws = 0;
    int losses = 0;
    int points = 0;  // 3 per win, 1 per draw
    long long total_score = 0;
    bool operator==(const TeamStanding&) const = default;
};

// Ranked by points, then total score, then name.
std::vector<TeamStanding> compute_standings(const std::vector<SimAssignment>& sims,
                                            const std::vector<MatchReport>& reports);

std::string standings_csv(const std::vector<TeamStanding>& standings);

// Per-step progression of one recorded match: score per team, cumulative
// completed tasks, open tasks, disabled agents per team and clear events,
// one row per step plus a closing "total" row.
std::string stats_csv(const nlohmann::ordered_json& replay);

struct TournamentOptions {
    SimConfig base;
    std::map<std::string, std::string> teams;  // team name -> behavior name
    std::string out_dir;                       // empty: keep everything in memory
    int jobs = 1;
};

struct TournamentResult {
    std::vector<SimAssignment> sims;
    std::vector<MatchReport> reports;  // parallel to sims
    std::vector<TeamStanding> standings;
};

// Plays the full schedule with in-process behavior agents, `jobs` matches at
// a time, and writes replay.simN.json, stats.simN.csv and standings.csv to
// out_dir when one is given.
TournamentResult run_tournament(const TournamentOptions& options);

}  // namespace gridsim
