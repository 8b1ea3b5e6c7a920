#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace gridsim {

// Grid coordinates. x grows east, y grows south. Absolute positions are
// bounded by the grid, relative (percept) positions are not.
struct Position {
    int x = 0;
    int y = 0;

    friend constexpr Position operator+(Position a, Position b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Position operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr bool operator==(Position a, Position b) { return a.x == b.x && a.y == b.y; }
    friend constexpr bool operator!=(Position a, Position b) { return !(a == b); }
    // row-major order, used wherever a deterministic scan order is needed
    friend constexpr bool operator<(Position a, Position b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }

    constexpr int manhattan() const { return std::abs(x) + std::abs(y); }
    constexpr Position clockwise() const { return {-y, x}; }
    constexpr Position counterclockwise() const { return {y, -x}; }
};

constexpr int manhattan(Position a, Position b) { return (a - b).manhattan(); }

struct PositionHash {
    size_t operator()(Position p) const {
        return std::hash<int64_t>()((int64_t(p.x) << 32) ^ uint32_t(p.y));
    }
};

enum class Direction : uint8_t { North, South, East, West };

constexpr std::array<Direction, 4> all_directions{Direction::North, Direction::South,
                                                  Direction::East, Direction::West};

constexpr Position offset_of(Direction d) {
    switch (d) {
        case Direction::North: return {0, -1};
        case Direction::South: return {0, 1};
        case Direction::East: return {1, 0};
        case Direction::West: return {-1, 0};
    }
    return {};
}

constexpr std::string_view name_of(Direction d) {
    switch (d) {
        case Direction::North: return "north";
        case Direction::South: return "south";
        case Direction::East: return "east";
        case Direction::West: return "west";
    }
    return "";
}

std::optional<Direction> direction_from(std::string_view name);

// Offset of a unit-adjacent cell, if it is one.
std::optional<Direction> direction_between(Position from, Position to);

enum class Rotation : uint8_t { Clockwise, CounterClockwise };

constexpr Position rotate(Position p, Rotation r) {
    return r == Rotation::Clockwise ? p.clockwise() : p.counterclockwise();
}

constexpr std::string_view name_of(Rotation r) {
    return r == Rotation::Clockwise ? "clockwise" : "counterclockwise";
}

std::optional<Rotation> rotation_from(std::string_view name);

}  // namespace gridsim
