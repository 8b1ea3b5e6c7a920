#include "gridsim/actions.hpp"

#include <array>
#include <utility>

namespace gridsim {

namespace {

constexpr std::array<std::pair<ActionKind, std::string_view>, 11> kKindNames{{
    {ActionKind::Move, "move"},
    {ActionKind::Rotate, "rotate"},
    {ActionKind::Attach, "attach"},
    {ActionKind::Detach, "detach"},
    {ActionKind::Connect, "connect"},
    {ActionKind::Disconnect, "disconnect"},
    {ActionKind::Request, "request"},
    {ActionKind::Clear, "clear"},
    {ActionKind::Submit, "submit"},
    {ActionKind::Skip, "skip"},
    {ActionKind::NoOp, "no_op"},
}};

constexpr std::array<std::pair<Outcome, std::string_view>, 9> kOutcomeNames{{
    {Outcome::Success, "success"},
    {Outcome::FailedPath, "failed_path"},
    {Outcome::FailedParameter, "failed_parameter"},
    {Outcome::FailedTarget, "failed_target"},
    {Outcome::FailedPartner, "failed_partner"},
    {Outcome::FailedBlocked, "failed_blocked"},
    {Outcome::FailedStatus, "failed_status"},
    {Outcome::FailedResources, "failed_resources"},
    {Outcome::NoOp, "no_op"},
}};

}  // namespace

std::string_view name_of(ActionKind k) {
    for (auto [kind, name] : kKindNames)
        if (kind == k) return name;
    return "";
}

std::optional<ActionKind> action_kind_from(std::string_view name) {
    for (auto [kind, n] : kKindNames)
        if (n == name) return kind;
    return std::nullopt;
}

std::string_view name_of(Outcome o) {
    for (auto [outcome, name] : kOutcomeNames)
        if (outcome == o) return name;
    return "";
}

std::optional<Outcome> outcome_from(std::string_view name) {
    for (auto [outcome, n] : kOutcomeNames)
        if (n == name) return outcome;
    return std::nullopt;
}

Action Action::move(Direction d) {
    Action a;
    a.kind = ActionKind::Move;
    a.dir = d;
    return a;
}

Action Action::rotate(Rotation r) {
    Action a;
    a.kind = ActionKind::Rotate;
    a.rot = r;
    return a;
}

Action Action::attach(Direction d) {
    Action a;
    a.kind = ActionKind::Attach;
    a.dir = d;
    return a;
}

Action Action::detach(Direction d) {
    Action a;
    a.kind = ActionKind::Detach;
    a.dir = d;
    return a;
}

Action Action::connect(std::string partner, Position own_block) {
    Action a;
    a.kind = ActionKind::Connect;
    a.partner = std::move(partner);
    a.p1 = own_block;
    return a;
}

Action Action::disconnect(Position first, Position second) {
    Action a;
    a.kind = ActionKind::Disconnect;
    a.p1 = first;
    a.p2 = second;
    return a;
}

Action Action::request(Direction d) {
    Action a;
    a.kind = ActionKind::Request;
    a.dir = d;
    return a;
}

Action Action::clear(Position target) {
    Action a;
    a.kind = ActionKind::Clear;
    a.p1 = target;
    return a;
}

Action Action::submit(std::string task) {
    Action a;
    a.kind = ActionKind::Submit;
    a.task = std::move(task);
    return a;
}

Action Action::skip() {
    Action a;
    a.kind = ActionKind::Skip;
    return a;
}

Action Action::no_op() { return {}; }

}  // namespace gridsim
