#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gridsim/geometry.hpp"

namespace gridsim {

enum class ActionKind : uint8_t {
    Move,
    Rotate,
    Attach,
    Detach,
    Connect,
    Disconnect,
    Request,
    Clear,
    Submit,
    Skip,
    NoOp,  // reserved for timeouts and invalid documents, never client-requested
};

std::string_view name_of(ActionKind k);
std::optional<ActionKind> action_kind_from(std::string_view name);

// One submitted action. Only the fields of the given kind are meaningful.
struct Action {
    ActionKind kind = ActionKind::NoOp;
    Direction dir = Direction::North;    // move, attach, detach, request
    Rotation rot = Rotation::Clockwise;  // rotate
    std::string partner;                 // connect
    Position p1{};                       // connect (own block), disconnect, clear
    Position p2{};                       // disconnect (second block)
    std::string task;                    // submit

    bool operator==(const Action&) const = default;

    static Action move(Direction d);
    static Action rotate(Rotation r);
    static Action attach(Direction d);
    static Action detach(Direction d);
    static Action connect(std::string partner, Position own_block);
    static Action disconnect(Position a, Position b);
    static Action request(Direction d);
    static Action clear(Position target);
    static Action submit(std::string task);
    static Action skip();
    static Action no_op();
};

enum class Outcome : uint8_t {
    Success,
    FailedPath,
    FailedParameter,
    FailedTarget,
    FailedPartner,
    FailedBlocked,
    FailedStatus,
    FailedResources,
    NoOp,
};

// These strings are part of the wire protocol.
std::string_view name_of(Outcome o);
std::optional<Outcome> outcome_from(std::string_view name);

// An action with its resolution, kept per agent for the next percept.
struct ActionRecord {
    Action action;
    Outcome outcome = Outcome::NoOp;
    bool operator==(const ActionRecord&) const = default;
};

}  // namespace gridsim
