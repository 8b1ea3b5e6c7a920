#include "gridsim/protocol.hpp"

#include "gridsim/serial.hpp"

namespace gridsim {

using nlohmann::ordered_json;

std::string_view message_type(const Message& msg) {
    switch (msg.index()) {
        case 0: return "auth-request";
        case 1: return "auth-response";
        case 2: return "sim-start";
        case 3: return "request-action";
        case 4: return "action";
        case 5: return "sim-end";
        default: return "bye";
    }
}

std::string encode(const Message& msg) {
    ordered_json content = ordered_json::object();
    if (const auto* m = std::get_if<AuthRequest>(&msg)) {
        content["agent"] = m->agent;
        content["password"] = m->password;
    } else if (const auto* m = std::get_if<AuthResponse>(&msg)) {
        content["result"] = m->ok ? "ok" : "fail";
    } else if (const auto* m = std::get_if<SimStart>(&msg)) {
        content["simId"] = m->sim_id;
        content["team"] = m->team;
        content["agent"] = m->agent;
        content["teamSize"] = m->team_size;
        content["steps"] = m->steps;
        content["vision"] = m->vision;
    } else if (const auto* m = std::get_if<RequestAction>(&msg)) {
        content["id"] = m->id;
        content["percept"] = percept_to_json(m->percept);
    } else if (const auto* m = std::get_if<ActionMessage>(&msg)) {
        content["id"] = m->id;
        content["action"] = action_to_json(m->action);
    } else if (const auto* m = std::get_if<SimEnd>(&msg)) {
        content["score"] = m->score;
        content["ranking"] = m->ranking;
    }
    ordered_json j;
    j["type"] = std::string(message_type(msg));
    j["content"] = std::move(content);
    std::string out = j.dump();
    out.push_back('\0');
    return out;
}

Message decode_document(std::string_view doc) {
    ordered_json j;
    try {
        j = ordered_json::parse(doc);
    } catch (const nlohmann::json::exception&) {
        throw DecodeError("document", "not valid JSON");
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw DecodeError("type", "missing or not a string");
    }
    std::string type = j["type"];
    if (!j.contains("content") || !j["content"].is_object()) {
        throw DecodeError("content", "missing or not an object");
    }
    const ordered_json& c = j["content"];
    auto str = [&](const char* key) -> std::string {
        if (!c.contains(key) || !c[key].is_string()) {
            throw DecodeError(std::string("content.") + key, "missing or not a string");
        }
        return c[key];
    };
    auto integer = [&](const char* key) -> long long {
        if (!c.contains(key) || !c[key].is_number_integer()) {
            throw DecodeError(std::string("content.") + key, "missing or not an integer");
        }
        return c[key];
    };

    if (type == "auth-request") return AuthRequest{str("agent"), str("password")};
    if (type == "auth-response") {
        std::string result = str("result");
        if (result != "ok" && result != "fail") {
            throw DecodeError("content.result", "expected ok or fail");
        }
        return AuthResponse{result == "ok"};
    }
    if (type == "sim-start") {
        return SimStart{str("simId"),
                        str("team"),
                        str("agent"),
                        static_cast<int>(integer("teamSize")),
                        static_cast<int>(integer("steps")),
                        static_cast<int>(integer("vision"))};
    }
    if (type == "request-action") {
        RequestAction m;
        m.id = integer("id");
        if (!c.contains("percept") || !c["percept"].is_object()) {
            throw DecodeError("content.percept", "missing or not an object");
        }
        try {
            m.percept = percept_from_json(c["percept"]);
        } catch (const std::exception& e) {
            throw DecodeError("content.percept", e.what());
        }
        return m;
    }
    if (type == "action") {
        ActionMessage m;
        m.id = integer("id");
        if (!c.contains("action") || !c["action"].is_object()) {
            throw DecodeError("content.action", "missing or not an object");
        }
        try {
            m.action = action_from_json(c["action"]);
        } catch (const std::exception& e) {
            throw DecodeError("content.action", e.what());
        }
        if (m.action.kind == ActionKind::NoOp) {
            throw DecodeError("content.action", "no_op cannot be requested");
        }
        return m;
    }
    if (type == "sim-end") {
        return SimEnd{integer("score"), static_cast<int>(integer("ranking"))};
    }
    if (type == "bye") return Bye{};
    throw DecodeError("type", "unknown type '" + type + "'");
}

std::optional<std::string> FrameReader::next() {
    size_t end = buffer_.find('\0');
    if (end == std::string::npos) {
        if (buffer_.size() > max_size_) {
            buffer_.clear();
            throw DecodeError("document", "frame exceeds size limit");
        }
        return std::nullopt;
    }
    std::string doc = buffer_.substr(0, end);
    buffer_.erase(0, end + 1);
    if (doc.size() > max_size_) throw DecodeError("document", "frame exceeds size limit");
    return doc;
}

}  // namespace gridsim
