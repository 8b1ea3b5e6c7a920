#include "gridsim/geometry.hpp"

namespace gridsim {

std::optional<Direction> direction_from(std::string_view name) {
    for (Direction d : all_directions)
        if (name == name_of(d)) return d;
    return std::nullopt;
}

std::optional<Direction> direction_between(Position from, Position to) {
    for (Direction d : all_directions)
        if (from + offset_of(d) == to) return d;
    return std::nullopt;
}

std::optional<Rotation> rotation_from(std::string_view name) {
    if (name == "clockwise") return Rotation::Clockwise;
    if (name == "counterclockwise") return Rotation::CounterClockwise;
    return std::nullopt;
}

}  // namespace gridsim
