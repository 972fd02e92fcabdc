// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>

namespace bellsim {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Canonical representative of an angle in [-pi, pi). +pi maps to -pi.
inline double canonical_angle(double theta) {
    double m = std::fmod(theta + kPi, kTwoPi);
    if (m < 0.0) m += kTwoPi;
    double r = m - kPi;
    if (r >= kPi) r -= kTwoPi;  // fmod seam can round m up to 2*pi
    return r;
}

/// Distance between two angles along the circle, in [0, pi].
inline double circle_distance(double a, double b) {
    return std::fabs(canonical_angle(a - b));
}

/// sign(x mod [-pi, pi)), with sign(0) := +1.
inline int q_sign(double x) {
    return canonical_angle(x) >= 0.0 ? 1 : -1;
}

}  // namespace bellsim
