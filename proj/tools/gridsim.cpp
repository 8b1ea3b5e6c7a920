#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gridsim/behaviors.hpp"
#include "gridsim/client.hpp"
#include "gridsim/config.hpp"
#include "gridsim/render.hpp"
#include "gridsim/replay.hpp"
#include "gridsim/server.hpp"
#include "gridsim/tournament.hpp"
#include "gridsim/world.hpp"
#include "json.hpp"

namespace {

using gridsim::SimConfig;
using nlohmann::ordered_json;

// Options shared by every command that builds a SimConfig: a settings file
// plus flag overrides, flags winning.
struct ConfigCli {
    std::string file;
    int steps = 0;
    uint64_t seed = 0;
    int agents = 0;
    long long deadline_ms = 0;
    int max_blocks = 0;
    double event_probability = 0;
    int width = 0;
    int height = 0;
    int param_set = 1;
    std::vector<std::string> teams;

    CLI::Option* o_steps = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_agents = nullptr;
    CLI::Option* o_deadline = nullptr;
    CLI::Option* o_max_blocks = nullptr;
    CLI::Option* o_event = nullptr;
    CLI::Option* o_width = nullptr;
    CLI::Option* o_height = nullptr;
    CLI::Option* o_param = nullptr;
    CLI::Option* o_teams = nullptr;
};

void add_config_options(CLI::App* cmd, ConfigCli& c) {
    cmd->add_option("--config", c.file, "settings file (key = value lines)");
    c.o_param = cmd->add_option("--param-set", c.param_set, "tournament parameter set (1-3)")
                    ->check(CLI::Range(1, 3));
    c.o_steps = cmd->add_option("--steps", c.steps, "steps per match");
    c.o_seed = cmd->add_option("--seed", c.seed, "base RNG seed");
    c.o_agents = cmd->add_option("--agents-per-team", c.agents, "agents per team");
    c.o_deadline = cmd->add_option("--deadline-ms", c.deadline_ms, "per-step answer deadline");
    c.o_max_blocks = cmd->add_option("--max-blocks", c.max_blocks, "largest task size");
    c.o_event = cmd->add_option("--event-probability", c.event_probability,
                                "clear event chance per step");
    c.o_width = cmd->add_option("--width", c.width, "grid width");
    c.o_height = cmd->add_option("--height", c.height, "grid height");
    c.o_teams = cmd->add_option("--teams", c.teams, "team names")->delimiter(',');
}

SimConfig resolve_config(const ConfigCli& c) {
    SimConfig cfg = c.file.empty() ? SimConfig{} : gridsim::load_config_file(c.file);
    if (c.o_param->count()) cfg = gridsim::apply_param_set(cfg, c.param_set);
    if (c.o_steps->count()) cfg.steps = c.steps;
    if (c.o_seed->count()) cfg.seed = c.seed;
    if (c.o_agents->count()) cfg.agents_per_team = c.agents;
    if (c.o_deadline->count()) cfg.deadline_ms = c.deadline_ms;
    if (c.o_max_blocks->count()) cfg.max_blocks = c.max_blocks;
    if (c.o_event->count()) cfg.clear_event_probability = c.event_probability;
    if (c.o_width->count()) cfg.width = c.width;
    if (c.o_height->count()) cfg.height = c.height;
    if (c.o_teams->count()) cfg.teams = c.teams;
    cfg.validate();
    return cfg;
}

// "Team=behavior" pairs from repeated --team flags; teams without an entry
// fall back to `fallback`.
std::map<std::string, std::string> team_behaviors(const std::vector<std::string>& specs,
                                                  const std::vector<std::string>& teams,
                                                  const std::string& fallback) {
    std::map<std::string, std::string> map;
    for (const std::string& t : teams) map[t] = fallback;
    for (const std::string& spec : specs) {
        size_t eq = spec.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--team expects NAME=BEHAVIOR, got '" + spec + "'");
        }
        std::string team = spec.substr(0, eq);
        std::string behavior = spec.substr(eq + 1);
        if (!map.count(team)) {
            throw std::invalid_argument("--team names unknown team '" + team + "'");
        }
        map[team] = behavior;
    }
    for (const auto& [team, behavior] : map) {
        if (!gridsim::behavior_from(behavior)) {
            throw std::invalid_argument("unknown behavior '" + behavior + "'");
        }
    }
    return map;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_match_files(const std::string& out_dir, const gridsim::MatchReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / ("replay." + report.sim_id + ".json"),
               report.replay.dump() + "\n");
    write_file(fs::path(out_dir) / ("stats." + report.sim_id + ".csv"),
               gridsim::stats_csv(report.replay));
}

void print_match_result(const gridsim::MatchReport& report) {
    long long best = 0;
    for (const auto& [team, score] : report.scores) best = std::max(best, score);
    std::vector<std::string> leaders;
    for (const auto& [team, score] : report.scores) {
        std::cout << report.sim_id << "  " << team << "  " << score << "\n";
        if (score == best) leaders.push_back(team);
    }
    if (leaders.size() == 1) {
        std::cout << "winner: " << leaders[0] << "\n";
    } else {
        std::cout << "draw\n";
    }
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return ordered_json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid contest platform: match server, tournament runner, agents, replays"};
    app.require_subcommand(1);
    int exit_code = 0;

    // --- match ---------------------------------------------------------
    auto* match = app.add_subcommand("match", "run one simulation with built-in teams, no network");
    auto match_cfg = std::make_shared<ConfigCli>();
    add_config_options(match, *match_cfg);
    auto match_teams = std::make_shared<std::vector<std::string>>();
    auto match_fallback = std::make_shared<std::string>("explorer_digger");
    auto match_out = std::make_shared<std::string>("out");
    auto match_sim = std::make_shared<std::string>("sim1");
    match->add_option("--team", *match_teams, "NAME=BEHAVIOR, repeatable");
    match->add_option("--behavior", *match_fallback, "behavior for teams without --team");
    match->add_option("--out", *match_out, "output directory");
    match->add_option("--sim-id", *match_sim, "identifier used in file names");
    match->callback([=, &exit_code] {
        SimConfig cfg = resolve_config(*match_cfg);
        auto behaviors = team_behaviors(*match_teams, cfg.teams, *match_fallback);
        gridsim::MatchReport report = gridsim::run_match_inprocess(cfg, behaviors, *match_sim);
        write_match_files(*match_out, report);
        print_match_result(report);
        exit_code = 0;
    });

    // --- serve ---------------------------------------------------------
    auto* serve = app.add_subcommand("serve", "run one simulation for remote agents");
    auto serve_cfg = std::make_shared<ConfigCli>();
    add_config_options(serve, *serve_cfg);
    auto serve_host = std::make_shared<std::string>("127.0.0.1");
    auto serve_port = std::make_shared<uint16_t>(uint16_t{12300});
    auto serve_roster = std::make_shared<std::string>();
    auto serve_out = std::make_shared<std::string>("out");
    auto serve_sim = std::make_shared<std::string>("sim1");
    serve->add_option("--host", *serve_host, "listen address");
    serve->add_option("--port", *serve_port, "listen port, 0 picks one");
    serve->add_option("--roster", *serve_roster, "credentials file (team agent password lines)");
    serve->add_option("--out", *serve_out, "output directory");
    serve->add_option("--sim-id", *serve_sim, "identifier used in file names");
    serve->callback([=, &exit_code] {
        SimConfig cfg = resolve_config(*serve_cfg);
        gridsim::Roster roster = serve_roster->empty() ? gridsim::default_roster(cfg)
                                                       : gridsim::load_roster_file(*serve_roster);
        gridsim::NetworkFrontend frontend(roster, *serve_host, *serve_port);
        std::cout << "listening on " << *serve_host << ":" << frontend.port() << "\n";
        int bound = frontend.wait_for_logins(std::chrono::milliseconds(cfg.connect_timeout_ms));
        std::cout << bound << "/" << roster.size() << " agents connected\n";
        gridsim::MatchReport report = gridsim::run_match(cfg, frontend, *serve_sim);
        frontend.shutdown();
        write_match_files(*serve_out, report);
        print_match_result(report);
        exit_code = 0;
    });

    // --- tournament ------------------------------------------------------
    auto* tour = app.add_subcommand("tournament", "round robin over all team pairs");
    auto tour_cfg = std::make_shared<ConfigCli>();
    add_config_options(tour, *tour_cfg);
    auto tour_teams = std::make_shared<std::vector<std::string>>();
    auto tour_out = std::make_shared<std::string>("out");
    auto tour_jobs = std::make_shared<int>(1);
    tour->add_option("--team", *tour_teams, "NAME=BEHAVIOR, repeatable")->required();
    tour->add_option("--out", *tour_out, "output directory");
    tour->add_option("--jobs", *tour_jobs, "simulations run in parallel")->check(CLI::Range(1, 256));
    tour->callback([=, &exit_code] {
        gridsim::TournamentOptions options;
        options.base = resolve_config(*tour_cfg);
        std::vector<std::string> names;
        for (const std::string& spec : *tour_teams) {
            size_t eq = spec.find('=');
            if (eq != std::string::npos) names.push_back(spec.substr(0, eq));
        }
        options.teams = team_behaviors(*tour_teams, names, "random_walker");
        options.out_dir = *tour_out;
        options.jobs = *tour_jobs;
        gridsim::TournamentResult result = gridsim::run_tournament(options);
        std::cout << gridsim::standings_csv(result.standings);
        exit_code = 0;
    });

    // --- agent run -------------------------------------------------------
    auto* agent = app.add_subcommand("agent", "agent client tooling");
    agent->require_subcommand(1);
    auto* run = agent->add_subcommand("run", "connect a team of built-in agents to a server");
    auto run_team = std::make_shared<std::string>();
    auto run_behavior = std::make_shared<std::string>("random_walker");
    auto run_host = std::make_shared<std::string>("127.0.0.1");
    auto run_port = std::make_shared<uint16_t>(uint16_t{12300});
    auto run_seed = std::make_shared<uint64_t>(uint64_t{1});
    run->add_option("--team", *run_team, "credentials file for the agents to run")->required();
    run->add_option("--behavior", *run_behavior, "decision policy for every agent");
    run->add_option("--host", *run_host, "server address");
    run->add_option("--port", *run_port, "server port");
    run->add_option("--seed", *run_seed, "client-side RNG seed");
    run->callback([=, &exit_code] {
        if (!gridsim::behavior_from(*run_behavior)) {
            throw std::invalid_argument("unknown behavior '" + *run_behavior + "'");
        }
        gridsim::Roster roster = gridsim::load_roster_file(*run_team);
        std::map<std::string, gridsim::TeamBlackboard> boards;
        std::vector<gridsim::SessionLog> logs(roster.size());
        std::vector<std::thread> threads;
        for (size_t i = 0; i < roster.size(); ++i) {
            gridsim::TeamBlackboard& board = boards[roster[i].team];
            gridsim::ClientOptions opts;
            opts.host = *run_host;
            opts.port = *run_port;
            opts.agent = roster[i].agent;
            opts.password = roster[i].password;
            opts.behavior = *run_behavior;
            opts.seed = *run_seed;
            threads.emplace_back(
                [&, i, opts] { logs[i] = gridsim::run_client(opts, board); });
        }
        for (auto& t : threads) t.join();
        bool all_ok = true;
        for (size_t i = 0; i < roster.size(); ++i) {
            const gridsim::SessionLog& log = logs[i];
            std::cout << roster[i].agent << ": " << (log.completed ? "completed" : "incomplete")
                      << ", " << log.actions << " actions";
            if (log.final_score >= 0) {
                std::cout << ", score " << log.final_score << ", rank " << log.ranking;
            }
            std::cout << "\n";
            for (const std::string& note : log.notes) {
                std::cout << "  " << roster[i].agent << ": " << note << "\n";
            }
            all_ok = all_ok && log.authenticated && log.completed;
        }
        exit_code = all_ok ? 0 : 1;
    });

    // --- replay render / verify -----------------------------------------
    auto* replay = app.add_subcommand("replay", "inspect recorded simulations");
    replay->require_subcommand(1);

    auto* render = replay->add_subcommand("render", "print one frame as ASCII");
    auto render_in = std::make_shared<std::string>();
    auto render_step = std::make_shared<int>(-1);
    auto render_status = std::make_shared<bool>(false);
    render->add_option("--in", *render_in, "replay file")->required();
    render->add_option("--step", *render_step, "frame to draw, last when omitted");
    render->add_flag("--status", *render_status, "append scores and open tasks");
    render->callback([=, &exit_code] {
        ordered_json doc = load_json_file(*render_in);
        int step = *render_step;
        if (step < 0) step = doc.at("frames").back().at("step").get<int>();
        gridsim::WorldState world =
            gridsim::world_from_json(gridsim::reconstruct_frame(doc, step));
        std::cout << gridsim::render_world(world);
        if (*render_status) std::cout << gridsim::render_status(world) << "\n";
        exit_code = 0;
    });

    auto* verify = replay->add_subcommand("verify", "re-simulate and compare frame hashes");
    auto verify_in = std::make_shared<std::string>();
    verify->add_option("--in", *verify_in, "replay file")->required();
    verify->callback([=, &exit_code] {
        gridsim::VerifyResult result = gridsim::verify_replay(load_json_file(*verify_in));
        if (result.ok) {
            std::cout << "OK\n";
            exit_code = 0;
        } else {
            std::cout << "FAIL at step " << result.first_divergent_step << ": " << result.detail
                      << "\n";
            exit_code = 3;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
