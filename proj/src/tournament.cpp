#include "gridsim/tournament.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gridsim/replay.hpp"

namespace gridsim {

using nlohmann::ordered_json;

std::vector<SimAssignment> schedule(const SimConfig& base, std::vector<std::string> teams) {
    std::sort(teams.begin(), teams.end());
    teams.erase(std::unique(teams.begin(), teams.end()), teams.end());
    if (teams.size() < 2) throw std::invalid_argument("a tournament needs at least two teams");
    std::vector<SimAssignment> sims;
    for (size_t i = 0; i < teams.size(); ++i) {
        for (size_t j = i + 1; j < teams.size(); ++j) {
            for (int set = 1; set <= 3; ++set) {
                SimAssignment sim;
                sim.index = static_cast<int>(sims.size());
                sim.team_a = teams[i];
                sim.team_b = teams[j];
                sim.param_set = set;
                sim.config = apply_param_set(base, set);
                sim.config.teams = {sim.team_a, sim.team_b};
                sim.config.seed = base.seed + static_cast<uint64_t>(sim.index);
                sims.push_back(std::move(sim));
            }
        }
    }
    return sims;
}

std::vector<TeamStanding> compute_standings(const std::vector<SimAssignment>& sims,
                                            const std::vector<MatchReport>& reports) {
    std::map<std::string, TeamStanding> table;
    for (size_t i = 0; i < sims.size(); ++i) {
        const SimAssignment& sim = sims[i];
        const MatchReport& report = reports.at(i);
        long long a = report.scores.at(sim.team_a);
        long long b = report.scores.at(sim.team_b);
        TeamStanding& ta = table[sim.team_a];
        TeamStanding& tb = table[sim.team_b];
        ta.team = sim.team_a;
        tb.team = sim.team_b;
        ++ta.played;
        ++tb.played;
        ta.total_score += a;
        tb.total_score += b;
        if (a > b) {
            ++ta.wins;
            ++tb.losses;
            ta.points += 3;
        } else if (b > a) {
            ++tb.wins;
            ++ta.losses;
            tb.points += 3;
        } else {
            ++ta.draws;
            ++tb.draws;
            ta.points += 1;
            tb.points += 1;
        }
    }
    std::vector<TeamStanding> standings;
    for (auto& [name, standing] : table) standings.push_back(standing);
    std::sort(standings.begin(), standings.end(), [](const TeamStanding& x, const TeamStanding& y) {
        if (x.points != y.points) return x.points > y.points;
        if (x.total_score != y.total_score) return x.total_score > y.total_score;
        return x.team < y.team;
    });
    return standings;
}

std::string standings_csv(const std::vector<TeamStanding>& standings) {
    std::ostringstream out;
    out << "rank,team,played,wins,draws,losses,points,totalScore\n";
    for (size_t i = 0; i < standings.size(); ++i) {
        const TeamStanding& s = standings[i];
        out << i + 1 << ',' << s.team << ',' << s.played << ',' << s.wins << ',' << s.draws << ','
            << s.losses << ',' << s.points << ',' << s.total_score << '\n';
    }
    return out.str();
}

std::string stats_csv(const ordered_json& replay) {
    std::vector<std::string> teams;
    for (const auto& t : replay.at("teams")) teams.push_back(t.get<std::string>());

    std::ostringstream out;
    out << "step";
    for (const auto& t : teams) out << ",score:" << t;
    out << ",completed,activeTasks";
    for (const auto& t : teams) out << ",disabled:" << t;
    out << ",events\n";

    long long completed = 0;
    std::map<std::string, long long> disabled_total;
    long long events_total = 0;
    ordered_json world;
    const ordered_json& frames = replay.at("frames");

    for (const auto& frame : frames) {
        if (frame.contains("snapshot")) {
            world = frame.at("snapshot");
        } else {
            apply_world_delta(world, frame.at("delta"));
        }
        int step = frame.at("step").get<int>();
        long long events = 0;
        if (frame.contains("events")) events = static_cast<long long>(frame.at("events").size());
        events_total += events;
        if (frame.contains("actions")) {
            for (const auto& a : frame.at("actions")) {
                if (a.at("action").at("kind") == "submit" && a.at("outcome") == "success") {
                    ++completed;
                }
            }
        }
        std::map<std::string, long long> disabled;
        for (const auto& t : teams) disabled[t] = 0;
        for (const auto& thing : world.at("things")) {
            if (thing.at("kind") != "agent") continue;
            if (thing.at("disabledUntil").get<long long>() > step) {
                ++disabled[thing.at("team").get<std::string>()];
            }
        }
        for (const auto& [team, n] : disabled) disabled_total[team] += n;

        out << step;
        for (const auto& t : teams) out << ',' << world.at("scores").at(t).get<long long>();
        out << ',' << completed << ',' << world.at("tasks").size();
        for (const auto& t : teams) out << ',' << disabled[t];
        out << ',' << events << '\n';
    }

    out << "total";
    for (const auto& t : teams) out << ',' << world.at("scores").at(t).get<long long>();
    out << ',' << completed << ',' << world.at("tasks").size();
    for (const auto& t : teams) out << ',' << disabled_total[t];
    out << ',' << events_total << '\n';
    return out.str();
}

TournamentResult run_tournament(const TournamentOptions& options) {
    std::vector<std::string> names;
    for (const auto& [team, behavior] : options.teams) names.push_back(team);

    TournamentResult result;
    result.sims = schedule(options.base, names);
    result.reports.resize(result.sims.size());

    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= result.sims.size()) return;
            const SimAssignment& sim = result.sims[i];
            std::map<std::string, std::string> behaviors{
                {sim.team_a, options.teams.at(sim.team_a)},
                {sim.team_b, options.teams.at(sim.team_b)}};
            result.reports[i] = run_match_inprocess(sim.config, behaviors,
                                                    "sim" + std::to_string(sim.index + 1));
        }
    };
    int jobs = std::max(1, options.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    result.standings = compute_standings(result.sims, result.reports);

    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.out_dir);
        for (size_t i = 0; i < result.sims.size(); ++i) {
            std::string tag = "sim" + std::to_string(result.sims[i].index + 1);
            std::ofstream replay(fs::path(options.out_dir) / ("replay." + tag + ".json"));
            replay << result.reports[i].replay.dump() << '\n';
            std::ofstream stats(fs::path(options.out_dir) / ("stats." + tag + ".csv"));
            stats << stats_csv(result.reports[i].replay);
        }
        std::ofstream standings(fs::path(options.out_dir) / "standings.csv");
        standings << standings_csv(result.standings);
    }
    return result;
}

}  // namespace gridsim
