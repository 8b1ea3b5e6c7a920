#pragma once

#include <string>
#include <vector>

#include "gridsim/actions.hpp"
#include "gridsim/config.hpp"
#include "gridsim/geometry.hpp"
#include "gridsim/rng.hpp"

namespace gridsim {

struct WorldState;

// One required block, at a position relative to the submitting agent.
struct Requirement {
    Position pos;
    std::string block_type;
    bool operator==(const Requirement&) const = default;
};

// A block formation to assemble and deliver in a goal zone.
struct Task {
    std::string name;
    std::vector<Requirement> requirements;  // sorted by position
    long long reward = 0;
    int deadline = 0;  // last step at which submission is valid
    int spawned_at = 0;
    bool operator==(const Task&) const = default;
};

// 10 * blocks^2; throws std::invalid_argument for counts below 2.
long long task_reward(int block_count);

// Shape built by a seeded random walk from (0,1), never touching the origin.
// Block count is uniform in [2, cfg.max_blocks], types uniform per cell.
Task generate_task(Rng& rng, const SimConfig& cfg, int current_step, int task_id);

struct SubmitResult {
    Outcome outcome = Outcome::FailedTarget;
    std::vector<int> consumed;  // block ids removed on success
};

// Validates the formation around the submitting agent and, on success,
// consumes the blocks, credits the team and retires the task.
SubmitResult check_submission(WorldState& world, int agent_id, const std::string& task_name);

}  // namespace gridsim
