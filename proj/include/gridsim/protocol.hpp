#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "gridsim/actions.hpp"
#include "gridsim/perception.hpp"

namespace gridsim {

struct AuthRequest {
    std::string agent;
    std::string password;
    bool operator==(const AuthRequest&) const = default;
};

struct AuthResponse {
    bool ok = false;
    bool operator==(const AuthResponse&) const = default;
};

struct SimStart {
    std::string sim_id;
    std::string team;
    std::string agent;
    int team_size = 0;
    int steps = 0;
    int vision = 0;
    bool operator==(const SimStart&) const = default;
};

struct RequestAction {
    long long id = 0;
    Percept percept;
    bool operator==(const RequestAction&) const = default;
};

struct ActionMessage {
    long long id = 0;
    Action action;
    bool operator==(const ActionMessage&) const = default;
};

struct SimEnd {
    long long score = 0;
    int ranking = 0;
    bool operator==(const SimEnd&) const = default;
};

struct Bye {
    bool operator==(const Bye&) const = default;
};

using Message =
    std::variant<AuthRequest, AuthResponse, SimStart, RequestAction, ActionMessage, SimEnd, Bye>;

// The wire name of the message's type ("auth-request", "action", ...).
std::string_view message_type(const Message& msg);

// Decoding failure; `field` names the offending field ("content.agent",
// "type", "document", ...).
class DecodeError : public std::runtime_error {
  public:
    DecodeError(std::string field, const std::string& reason)
        : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

// One UTF-8 JSON document followed by a single zero byte.
std::string encode(const Message& msg);

// Parses one document (without the zero terminator). Throws DecodeError.
Message decode_document(std::string_view doc);

// Splits a byte stream into zero-terminated documents. next() throws
// DecodeError once the unterminated tail exceeds max_size.
class FrameReader {
  public:
    explicit FrameReader(size_t max_size = 1 << 20) : max_size_(max_size) {}

    void feed(const char* data, size_t n) { buffer_.append(data, n); }

    std::optional<std::string> next();

  private:
    std::string buffer_;
    size_t max_size_;
};

}  // namespace gridsim
