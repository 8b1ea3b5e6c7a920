#pragma once

#include "json.hpp"

#include "gridsim/actions.hpp"
#include "gridsim/tasks.hpp"
#include "gridsim/world.hpp"

namespace gridsim {

// Canonical JSON forms shared by world snapshots, replays and the wire
// protocol. Field order is fixed; do not reorder.
nlohmann::ordered_json config_to_json(const SimConfig& c);
SimConfig config_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json task_to_json(const Task& t);
Task task_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json action_to_json(const Action& a);
// throws std::invalid_argument on unknown kinds or malformed params
Action action_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json thing_to_json(const Thing& t);
Thing thing_from_json(const nlohmann::ordered_json& j);

}  // namespace gridsim
