#pragma once

#include <string>

#include "gridsim/world.hpp"

namespace gridsim {

// One glyph per cell: agents print their team's first letter (lowercase while
// disabled), blocks their type digit, then 'D' dispenser, '#' obstacle,
// 'G' goal, '.' empty. Rows end with '\n'.
std::string render_world(const WorldState& world);

// The frame header printed above each rendered grid: step, scores, tasks.
std::string render_status(const WorldState& world);

}  // namespace gridsim
