// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bellsim {

/// |E'| above this magnitude is reported as the infinite marker.
inline constexpr double kDerivativeInfinityThreshold = 1e12;

inline bool is_infinite(double v) { return std::isinf(v); }

/// A correlation function E(theta): 2*pi-periodic, even, antisymmetric about
/// pi/2, E(0) = -1, strictly increasing on [0, pi]. Immutable after
/// construction; all operations on it are pure.
struct CorrelationFamily {
    std::string name;
    std::optional<double> param;  // exponent of the power family

    std::function<double(double)> eval;     // canonical angle -> [-1, 1]
    std::function<double(double)> deriv;    // analytic E', empty when unavailable
    std::function<double(double)> inverse;  // analytic chi: [-1, 1] -> [0, pi], empty when unavailable

    /// False when E' has integrable singularities (power family, p < 1);
    /// consumers with stationarity-based tolerances branch on this.
    bool smooth_derivative = true;

    /// Float-noise budget for chi arguments at transformation-law corners.
    /// The exact argument is in [-1, 1]; evaluating E at a rounded corner
    /// angle can overshoot by ~(angle ulp)^p for singular families.
    double boundary_slack = 1e-12;

    /// Round-trippable family-spec string ("cosine", "power:<p>").
    std::string spec() const;
};

struct Violation {
    std::string constraint;  // "C1".."C4"
    double witness;          // worst offending angle
    double magnitude;
};

struct ValidationReport {
    bool passed = true;
    std::vector<Violation> violations;  // at most one entry per constraint
};

/// Parse a family-spec string: `cosine` | `power:<decimal>` with p > 0.
/// Throws std::invalid_argument on unknown names or bad exponents.
CorrelationFamily make_family(const std::string& spec);

/// E at the canonical representative of theta. Total.
double evaluate(const CorrelationFamily& f, double theta);

/// E'(theta): analytic when available, otherwise central difference with
/// h = 1e-6. Returns a signed infinity marker where |E'| > 1e12.
double derivative(const CorrelationFamily& f, double theta);

/// Inverse of E restricted to [0, pi]. Uses the analytic inverse when
/// present, otherwise bisection (<= 200 iterations, |E(x) - e| < 1e-12).
/// Throws std::domain_error for e outside [-1, +1].
double chi(const CorrelationFamily& f, double e);

/// Check membership in the admissible class on grid_n interior points of
/// (0, pi):
///   C1: E(0) = -1            (1e-10)
///   C2: E(-t) = E(t)         (1e-10)
///   C3: E(pi - t) = -E(t)    (1e-10)
///   C4: second difference (h = 1e-4) > -1e-6 on (1e-3, pi/2 - 1e-3)
/// Grid points whose derivative is flagged infinite are skipped.
ValidationReport validate(const CorrelationFamily& f, int grid_n);

}  // namespace bellsim
