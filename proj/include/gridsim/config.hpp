#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All tunables of one simulation. Serializes to a key-value text file; the
// same fields travel inside replay headers.
struct SimConfig {
    int steps = 500;
    int agents_per_team = 10;
    int width = 50;
    int height = 50;
    int vision_range = 5;
    int max_blocks = 3;
    double clear_event_probability = 0.04;
    int clear_charge = 3;
    int disable_duration = 4;
    int deadline_ms = 4000;
    uint64_t seed = 1;
    std::vector<std::string> teams = {"A", "B"};

    double obstacle_density = 0.1;
    int goal_zones = 2;
    int goal_zone_radius = 2;
    int dispensers_per_type = 2;
    int block_types = 3;
    int max_component_size = 10;
    int event_radius = 3;
    int event_regen_min = 5;
    int event_regen_max = 10;
    int task_cap = 2;
    double task_spawn_probability = 0.05;
    int task_deadline_min = 100;
    int task_deadline_max = 200;
    int connect_timeout_ms = 10000;

    bool operator==(const SimConfig&) const = default;

    // throws ConfigError when a value is out of range
    void validate() const;
};

// One `key = value` pair per line, `#` comments. Unknown keys and malformed
// values raise ConfigError with the offending line number.
SimConfig parse_config_text(const std::string& text);
SimConfig load_config_file(const std::string& path);
std::string config_to_text(const SimConfig& cfg);

// Tournament parameter sets: 1 baseline, 2 larger tasks, 3 more clear events.
SimConfig apply_param_set(SimConfig base, int set);

// Agent credentials, one `team,agent,password` line each.
struct Credential {
    std::string team;
    std::string agent;
    std::string password;
    bool operator==(const Credential&) const = default;
};

using Roster = std::vector<Credential>;

Roster parse_roster_text(const std::string& text);
Roster load_roster_file(const std::string& path);

// Team names in first-appearance order.
std::vector<std::string> roster_teams(const Roster& roster);

// Synthesizes a roster (names `<team>1..<team>N`, password = name) for
// in-process matches and tests.
Roster default_roster(const SimConfig& cfg);

}  // namespace gridsim
