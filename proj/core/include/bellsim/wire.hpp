// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellsim {

struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MessageType { Hello, Config, Assign, Outcome, Done };

const char* to_string(MessageType t);

/// One frame of the session protocol. Only the payload fields of the
/// carrying type are meaningful:
///   HELLO   role            (detector -> referee)
///   CONFIG  role, family    (referee -> detector)
///   ASSIGN  lambda          (referee -> detector)
///   OUTCOME s in {-1, +1}   (detector -> referee)
///   DONE    -               (referee -> detector)
struct WireMessage {
    MessageType type = MessageType::Hello;
    std::uint64_t round_id = 0;
    std::string role;
    std::string family;
    double lambda = 0.0;
    int s = 0;
};

/// JSON text of a message. ASSIGN serializes lambda as a decimal with 17
/// significant digits so the 64-bit value round-trips exactly.
std::string encode_message(const WireMessage& m);

/// Parse and structurally validate one message. Throws protocol_error,
/// quoting the offending text.
WireMessage parse_message(const std::string& text);

/// 4-byte big-endian length prefix + UTF-8 JSON body.
std::string encode_frame(const WireMessage& m);

inline constexpr std::uint32_t kMaxFrameBytes = 1 << 20;

}  // namespace bellsim
