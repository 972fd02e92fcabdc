// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "bellsim/bell_game.hpp"

namespace bellsim {

/// Configuration for one distributed session (referee + two detectors).
struct SessionConfig {
    std::string role;  // "referee" | "detector-a" | "detector-b"
    std::string family_spec = "cosine";
    double theta = 0.0;
    std::uint64_t rounds = 1;
    std::uint64_t seed = 0;

    std::string listen_host = "127.0.0.1";  // referee
    int listen_port = 0;                    // 0 = ephemeral
    std::string connect_host = "127.0.0.1"; // detectors
    int connect_port = 0;

    int accept_timeout_ms = 10000;
    int io_timeout_ms = 30000;

    /// Invoked by the referee once the listening socket is bound, with the
    /// actual host/port (useful with listen_port = 0).
    std::function<void(const std::string&, int)> on_listening;
};

struct HarnessResult {
    SimulationSummary summary;
    bool aborted = false;
    std::uint64_t completed_rounds = 0;
    std::string error;
};

struct DetectorResult {
    int status = 0;  // 0 ok, nonzero protocol/transport failure
    std::uint64_t rounds_served = 0;
    std::string error;
};

/// Drive a full session: accept both detectors, send each its CONFIG, then
/// per round derive u from (seed, round_id), compute lambda_A and
/// lambda_B = transform(lambda_A), ASSIGN each detector only its own
/// coordinate, and collect the OUTCOME pair. The summary aggregation is the
/// same code path as simulate(), so a completed session is bit-identical to
/// the in-process run. Protocol violations and lost connections abort the
/// session with a partial summary flagged in the result.
/// Throws std::runtime_error when no/not all detectors connect in time.
HarnessResult referee_run(const SessionConfig& cfg);

/// Pure tau evaluator: replies OUTCOME(response(lambda)) to each ASSIGN
/// until DONE. The detector never learns theta, the other coordinate, or
/// the other outcome. Non-canonical ASSIGN lambda (outside [-pi, pi)) is a
/// protocol error.
DetectorResult detector_run(const SessionConfig& cfg);

}  // namespace bellsim
