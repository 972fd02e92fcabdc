// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>

#include "bellsim/correlation_family.hpp"

namespace bellsim {

/// A validated family plus the relative detector angle. Immutable and
/// shareable across threads.
struct ModelContext {
    CorrelationFamily family;
    double theta = 0.0;  // canonical in [-pi, pi)

    /// Canonicalizes theta and rejects families failing validate().
    static ModelContext make(CorrelationFamily family, double theta, int validation_grid = 2001);
};

/// Detector response tau: +1 on [0, pi), -1 on [-pi, 0).
inline int response(double lambda) { return lambda >= 0.0 ? 1 : -1; }

/// rho(lambda) = |E'(lambda)| / 4, propagating the infinite marker.
double density(const ModelContext& ctx, double lambda);

/// lambda_B = -L(lambda; theta): the piecewise chart-change map. Result is
/// canonical in [-pi, pi). chi arguments within the family's boundary_slack
/// of [-1, 1] are clamped in; anything further out throws std::logic_error
/// (a branch bug, not admissible rounding).
double transform(const ModelContext& ctx, double lambda);

/// Exact inverse-CDF sample of lambda_A from rho, u in [0, 1):
///   F(l) = (1 - E(l))/4 on [-pi, 0),  F(l) = (3 + E(l))/4 on [0, pi),
/// so u < 1/2 -> -chi(1 - 4u) and u >= 1/2 -> chi(4u - 3). Never evaluates
/// rho, so integrable singularities of E' are harmless.
double sample_lambda(const CorrelationFamily& f, double u);

/// Left endpoints of the four branch intervals of the transformation law;
/// branch k covers [b[k], b[k+1]) with b[4] = +pi understood.
/// theta >= 0: {-pi, theta - pi, 0, theta}; theta < 0: {-pi, theta, 0, theta + pi}.
std::array<double, 4> branch_boundaries(double theta);

/// Branch k's closed form evaluated at lambda (meaningful on the branch's
/// closure). chi arguments within boundary_slack of +-1 are snapped exactly
/// to +-1, making this suitable for one-sided limits at the corners, where
/// the exact argument is +-1 by the branch derivation.
double transform_branch(const ModelContext& ctx, double lambda, int branch);

}  // namespace bellsim
