// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "bellsim/correlation_family.hpp"

namespace bellsim {

struct ChshQuery {
    double theta1, theta2, delta;  // canonical in [-pi, pi)
};

struct ChshResult {
    ChshQuery query;               // argmax of |F|, canonical orbit representative
    double value;                  // F at the argmax (signed)
    double bound;                  // 4|E(pi/4)|
    double stationarity_residual;  // max-norm of grad F at the argmax
};

/// F(q) = E(t1) + E(t2) + E(t1 - d) - E(t2 - d), arguments canonicalized.
double chsh_value(const CorrelationFamily& f, const ChshQuery& q);

/// 4|E(pi/4)|: the maximum of |F| over the admissible class.
double generalized_bound(const CorrelationFamily& f);

/// max(|E'(t1) + E'(t1-d)|, |E'(t2) - E'(t2-d)|, |E'(t2-d) - E'(t1-d)|),
/// i.e. the max-norm of grad F. Infinite marker when any derivative is.
double stationarity_residual(const CorrelationFamily& f, const ChshQuery& q);

/// Dense grid_n^3 lattice scan of |F| over [-pi, pi)^3 followed by
/// coordinate-wise golden-section refinement with shrinking window until
/// the window is below refine_tol. Derivative-free on purpose: F has
/// stationary non-extremal points and possibly unbounded derivatives.
ChshResult optimize_chsh(const CorrelationFamily& f, int grid_n, double refine_tol);

struct BoundCheck {
    bool ok;            // every sampled |F| <= bound + 1e-9
    ChshQuery worst;    // query with the largest |F|
    double worst_value; // |F| there
};

/// Random-query stress test of the bound.
BoundCheck verify_bound(const CorrelationFamily& f, std::uint64_t samples, std::uint64_t seed);

/// |E(t)| > |E(pi/4)| on a grid_n grid of |t| < pi/4 - 1e-6.
bool small_angle_dominance(const CorrelationFamily& f, int grid_n);

}  // namespace bellsim
