// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "bellsim/hidden_model.hpp"

namespace bellsim {

/// Joint +-1 outcome probabilities at relative angle theta:
///   p(+,+) = p(-,-) = (1 + E)/4,  p(+,-) = p(-,+) = (1 - E)/4.
struct JointDistribution {
    double p_pp, p_pm, p_mp, p_mm;
};

struct RoundRecord {
    std::uint64_t round_id;
    double lambda_a, lambda_b;
    int s_a, s_b;
};

struct SimulationSummary {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    double theta = 0.0;
    std::uint64_t n_pp = 0, n_pm = 0, n_mp = 0, n_mm = 0;
    double correlation = 0.0;  // (n_pp - n_pm - n_mp + n_mm) / rounds
};

JointDistribution closed_form_distribution(const ModelContext& ctx);

/// One deterministic round from a single uniform draw u in [0, 1).
RoundRecord run_round(const ModelContext& ctx, double u, std::uint64_t round_id = 0);

/// Monte Carlo over `rounds` rounds. The per-round draw is
/// uniform_unit(seed, round_id), so outcome counts are bit-identical for
/// every worker count; workers only shard the tally.
SimulationSummary simulate(const ModelContext& ctx, std::uint64_t rounds, std::uint64_t seed,
                           int workers = 1);

/// Tally -> summary. Shared with the distributed referee so both paths
/// produce bit-identical summaries.
SimulationSummary finalize_summary(std::uint64_t rounds, std::uint64_t seed, double theta,
                                   std::uint64_t n_pp, std::uint64_t n_pm, std::uint64_t n_mp,
                                   std::uint64_t n_mm);

struct SweepPoint {
    double theta;
    double empirical;
    double closed_form;
};

/// Per theta: simulate(rounds, seed) paired with E(theta).
std::vector<SweepPoint> reconstruct_correlation(const CorrelationFamily& f,
                                                const std::vector<double>& thetas,
                                                std::uint64_t rounds, std::uint64_t seed,
                                                int workers = 1);

/// CSV with header `theta,empirical,closed_form`, 12 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace bellsim
