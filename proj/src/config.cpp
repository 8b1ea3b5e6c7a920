#include "gridsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace gridsim {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

int parse_int(const std::string& v, int line) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(line, "expected integer, got '" + v + "'");
    return out;
}

uint64_t parse_u64(const std::string& v, int line) {
    uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) fail(line, "expected integer, got '" + v + "'");
    return out;
}

double parse_double(const std::string& v, int line) {
    try {
        size_t used = 0;
        double out = std::stod(v, &used);
        if (used != v.size()) fail(line, "expected number, got '" + v + "'");
        return out;
    } catch (const std::logic_error&) {
        fail(line, "expected number, got '" + v + "'");
    }
}

std::vector<std::string> parse_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

void SimConfig::validate() const {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    check(steps >= 1, "steps must be >= 1");
    check(agents_per_team >= 1, "agents_per_team must be >= 1");
    check(width >= 10 && height >= 10, "grid must be at least 10x10");
    check(vision_range >= 1, "vision_range must be >= 1");
    check(max_blocks >= 2, "max_blocks must be >= 2");
    check(clear_event_probability >= 0.0 && clear_event_probability <= 1.0,
          "clear_event_probability must be in [0,1]");
    check(task_spawn_probability >= 0.0 && task_spawn_probability <= 1.0,
          "task_spawn_probability must be in [0,1]");
    check(obstacle_density >= 0.0 && obstacle_density <= 1.0, "obstacle_density must be in [0,1]");
    check(clear_charge >= 1, "clear_charge must be >= 1");
    check(disable_duration >= 1, "disable_duration must be >= 1");
    check(deadline_ms > 0, "deadline_ms must be > 0");
    check(teams.size() == 2, "exactly two teams required");
    check(teams[0] != teams[1], "team names must differ");
    check(block_types >= 1 && block_types <= 10, "block_types must be in [1,10]");
    check(event_regen_min >= 0 && event_regen_max >= event_regen_min,
          "event_regen bounds out of order");
    check(task_deadline_min >= 1 && task_deadline_max >= task_deadline_min,
          "task_deadline bounds out of order");
    check(max_component_size >= 2, "max_component_size must be >= 2");
    check(task_cap >= 0, "task_cap must be >= 0");
    check(goal_zones >= 1, "goal_zones must be >= 1");
    check(goal_zone_radius >= 0, "goal_zone_radius must be >= 0");
    check(dispensers_per_type >= 1, "dispensers_per_type must be >= 1");
}

SimConfig parse_config_text(const std::string& text) {
    SimConfig cfg;
    std::map<std::string, std::function<void(const std::string&, int)>> setters = {
        {"steps", [&](const std::string& v, int l) { cfg.steps = parse_int(v, l); }},
        {"agents_per_team", [&](const std::string& v, int l) { cfg.agents_per_team = parse_int(v, l); }},
        {"width", [&](const std::string& v, int l) { cfg.width = parse_int(v, l); }},
        {"height", [&](const std::string& v, int l) { cfg.height = parse_int(v, l); }},
        {"vision_range", [&](const std::string& v, int l) { cfg.vision_range = parse_int(v, l); }},
        {"max_blocks", [&](const std::string& v, int l) { cfg.max_blocks = parse_int(v, l); }},
        {"clear_event_probability",
         [&](const std::string& v, int l) { cfg.clear_event_probability = parse_double(v, l); }},
        {"clear_charge", [&](const std::string& v, int l) { cfg.clear_charge = parse_int(v, l); }},
        {"disable_duration", [&](const std::string& v, int l) { cfg.disable_duration = parse_int(v, l); }},
        {"deadline_ms", [&](const std::string& v, int l) { cfg.deadline_ms = parse_int(v, l); }},
        {"seed", [&](const std::string& v, int l) { cfg.seed = parse_u64(v, l); }},
        {"teams", [&](const std::string& v, int) { cfg.teams = parse_list(v); }},
        {"obstacle_density", [&](const std::string& v, int l) { cfg.obstacle_density = parse_double(v, l); }},
        {"goal_zones", [&](const std::string& v, int l) { cfg.goal_zones = parse_int(v, l); }},
        {"goal_zone_radius", [&](const std::string& v, int l) { cfg.goal_zone_radius = parse_int(v, l); }},
        {"dispensers_per_type",
         [&](const std::string& v, int l) { cfg.dispensers_per_type = parse_int(v, l); }},
        {"block_types", [&](const std::string& v, int l) { cfg.block_types = parse_int(v, l); }},
        {"max_component_size",
         [&](const std::string& v, int l) { cfg.max_component_size = parse_int(v, l); }},
        {"event_radius", [&](const std::string& v, int l) { cfg.event_radius = parse_int(v, l); }},
        {"event_regen_min", [&](const std::string& v, int l) { cfg.event_regen_min = parse_int(v, l); }},
        {"event_regen_max", [&](const std::string& v, int l) { cfg.event_regen_max = parse_int(v, l); }},
        {"task_cap", [&](const std::string& v, int l) { cfg.task_cap = parse_int(v, l); }},
        {"task_spawn_probability",
         [&](const std::string& v, int l) { cfg.task_spawn_probability = parse_double(v, l); }},
        {"task_deadline_min", [&](const std::string& v, int l) { cfg.task_deadline_min = parse_int(v, l); }},
        {"task_deadline_max", [&](const std::string& v, int l) { cfg.task_deadline_max = parse_int(v, l); }},
        {"connect_timeout_ms",
         [&](const std::string& v, int l) { cfg.connect_timeout_ms = parse_int(v, l); }},
    };

    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) fail(line, "unknown key '" + key + "'");
        it->second(value, line);
    }
    cfg.validate();
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const SimConfig& c) {
    std::ostringstream os;
    os << "steps = " << c.steps << "\n"
       << "agents_per_team = " << c.agents_per_team << "\n"
       << "width = " << c.width << "\n"
       << "height = " << c.height << "\n"
       << "vision_range = " << c.vision_range << "\n"
       << "max_blocks = " << c.max_blocks << "\n"
       << "clear_event_probability = " << format_double(c.clear_event_probability) << "\n"
       << "clear_charge = " << c.clear_charge << "\n"
       << "disable_duration = " << c.disable_duration << "\n"
       << "deadline_ms = " << c.deadline_ms << "\n"
       << "seed = " << c.seed << "\n"
       << "teams = ";
    for (size_t i = 0; i < c.teams.size(); ++i) os << (i ? "," : "") << c.teams[i];
    os << "\n"
       << "obstacle_density = " << format_double(c.obstacle_density) << "\n"
       << "goal_zones = " << c.goal_zones << "\n"
       << "goal_zone_radius = " << c.goal_zone_radius << "\n"
       << "dispensers_per_type = " << c.dispensers_per_type << "\n"
       << "block_types = " << c.block_types << "\n"
       << "max_component_size = " << c.max_component_size << "\n"
       << "event_radius = " << c.event_radius << "\n"
       << "event_regen_min = " << c.event_regen_min << "\n"
       << "event_regen_max = " << c.event_regen_max << "\n"
       << "task_cap = " << c.task_cap << "\n"
       << "task_spawn_probability = " << format_double(c.task_spawn_probability) << "\n"
       << "task_deadline_min = " << c.task_deadline_min << "\n"
       << "task_deadline_max = " << c.task_deadline_max << "\n"
       << "connect_timeout_ms = " << c.connect_timeout_ms << "\n";
    return os.str();
}

SimConfig apply_param_set(SimConfig base, int set) {
    switch (set) {
        case 1: break;
        case 2: base.max_blocks = 5; break;
        case 3: base.clear_event_probability = 0.08; break;
        default: throw ConfigError("unknown parameter set " + std::to_string(set));
    }
    return base;
}

Roster parse_roster_text(const std::string& text) {
    Roster roster;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        auto fields = parse_list(s);
        if (fields.size() != 3) fail(line, "expected 'team,agent,password'");
        roster.push_back({fields[0], fields[1], fields[2]});
    }
    for (size_t i = 0; i < roster.size(); ++i)
        for (size_t j = i + 1; j < roster.size(); ++j)
            if (roster[i].agent == roster[j].agent)
                throw ConfigError("duplicate agent name: " + roster[i].agent);
    return roster;
}

Roster load_roster_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open team file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_roster_text(buf.str());
}

std::vector<std::string> roster_teams(const Roster& roster) {
    std::vector<std::string> teams;
    for (const auto& c : roster)
        if (std::find(teams.begin(), teams.end(), c.team) == teams.end()) teams.push_back(c.team);
    return teams;
}

Roster default_roster(const SimConfig& cfg) {
    Roster roster;
    for (const auto& team : cfg.teams)
        for (int i = 1; i <= cfg.agents_per_team; ++i) {
            std::string name = team + std::to_string(i);
            roster.push_back({team, name, name});
        }
    return roster;
}

}  // namespace gridsim
