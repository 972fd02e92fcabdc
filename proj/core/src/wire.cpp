// SPDX-License-Identifier: Apache-2.0
#include "bellsim/wire.hpp"

#include <json.hpp>

#include "bellsim/format.hpp"

namespace bellsim {

using json = nlohmann::ordered_json;

const char* to_string(MessageType t) {
    switch (t) {
        case MessageType::Hello: return "HELLO";
        case MessageType::Config: return "CONFIG";
        case MessageType::Assign: return "ASSIGN";
        case MessageType::Outcome: return "OUTCOME";
        case MessageType::Done: return "DONE";
    }
    return "?";
}

namespace {

MessageType type_from(const std::string& s) {
    if (s == "HELLO") return MessageType::Hello;
    if (s == "CONFIG") return MessageType::Config;
    if (s == "ASSIGN") return MessageType::Assign;
    if (s == "OUTCOME") return MessageType::Outcome;
    if (s == "DONE") return MessageType::Done;
    throw protocol_error("unknown message type '" + s + "'");
}

}  // namespace

std::string encode_message(const WireMessage& m) {
    if (m.type == MessageType::Assign) {
        // lambda embedded as raw %.17g text, not via the JSON writer.
        std::string out = "{\"type\":\"ASSIGN\",\"round_id\":";
        out += std::to_string(m.round_id);
        out += ",\"payload\":{\"lambda\":";
        out += format_sig(m.lambda, 17);
        out += "}}";
        return out;
    }
    json payload = json::object();
    switch (m.type) {
        case MessageType::Hello:
            payload["role"] = m.role;
            break;
        case MessageType::Config:
            payload["role"] = m.role;
            payload["family"] = m.family;
            break;
        case MessageType::Outcome:
            payload["s"] = m.s;
            break;
        default:
            break;
    }
    json j;
    j["type"] = to_string(m.type);
    j["round_id"] = m.round_id;
    j["payload"] = payload;
    return j.dump();
}

WireMessage parse_message(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw protocol_error("malformed frame (not JSON): " + text.substr(0, 256));
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string() ||
        !j.contains("round_id") || !j["round_id"].is_number_integer() || !j.contains("payload") ||
        !j["payload"].is_object()) {
        throw protocol_error("malformed frame (bad envelope): " + text.substr(0, 256));
    }
    WireMessage m;
    m.type = type_from(j["type"].get<std::string>());
    m.round_id = j["round_id"].get<std::uint64_t>();
    const json& p = j["payload"];
    switch (m.type) {
        case MessageType::Hello:
            if (!p.contains("role") || !p["role"].is_string()) {
                throw protocol_error("HELLO frame missing role: " + text.substr(0, 256));
            }
            m.role = p["role"].get<std::string>();
            break;
        case MessageType::Config:
            if (!p.contains("role") || !p["role"].is_string() || !p.contains("family") ||
                !p["family"].is_string()) {
                throw protocol_error("CONFIG frame missing role/family: " + text.substr(0, 256));
            }
            m.role = p["role"].get<std::string>();
            m.family = p["family"].get<std::string>();
            break;
        case MessageType::Assign:
            if (!p.contains("lambda") || !p["lambda"].is_number()) {
                throw protocol_error("ASSIGN frame missing lambda: " + text.substr(0, 256));
            }
            m.lambda = p["lambda"].get<double>();
            break;
        case MessageType::Outcome:
            if (!p.contains("s") || !p["s"].is_number_integer()) {
                throw protocol_error("OUTCOME frame missing s: " + text.substr(0, 256));
            }
            m.s = p["s"].get<int>();
            break;
        case MessageType::Done:
            break;
    }
    return m;
}

std::string encode_frame(const WireMessage& m) {
    const std::string body = encode_message(m);
    const auto n = static_cast<std::uint32_t>(body.size());
    std::string out;
    out.reserve(body.size() + 4);
    out.push_back(static_cast<char>((n >> 24) & 0xff));
    out.push_back(static_cast<char>((n >> 16) & 0xff));
    out.push_back(static_cast<char>((n >> 8) & 0xff));
    out.push_back(static_cast<char>(n & 0xff));
    out += body;
    return out;
}

}  // namespace bellsim
