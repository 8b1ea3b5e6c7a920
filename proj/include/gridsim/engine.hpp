#pragma once

#include <map>
#include <vector>

#include "gridsim/actions.hpp"
#include "gridsim/world.hpp"

namespace gridsim {

// One environmental clear event: every cell within `radius` of `center` is
// cleared as by a fully charged clear action, then `regenerated` obstacles
// appear on free cells within radius + 2.
struct ClearEvent {
    Position center;
    int radius = 0;
    int regenerated = 0;
    bool operator==(const ClearEvent&) const = default;
};

struct ActionResult {
    int agent_id = 0;
    Action action;
    Outcome outcome = Outcome::NoOp;
};

struct StepOutput {
    std::vector<ActionResult> results;  // one per agent, ascending agent id
    std::vector<ClearEvent> events;
};

// Advances the world by one step: expires clear markers and overdue tasks,
// resolves all actions sequentially in a seeded-random agent permutation
// (mutual connect pairs resolve atomically at the earlier partner's slot),
// rolls the clear event and the task spawn, and increments the step counter.
// Agents missing from `actions` act as no_op.
StepOutput step(WorldState& world, const std::map<int, Action>& actions);

// Fires one clear event at a random interior center and returns it.
// step() calls this with the configured probability; exposed for tests.
ClearEvent apply_clear_event(WorldState& world);

}  // namespace gridsim
