// SPDX-License-Identifier: Apache-2.0
#include "bellsim/chsh.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bellsim/angle.hpp"
#include "bellsim/counter_rng.hpp"

namespace bellsim {
namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

/// Maximize g on [a, b] by golden-section search, bracket narrowed to tol.
template <typename G>
double golden_max(G&& g, double a, double b, double tol) {
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > tol) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - kGolden * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + kGolden * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

ChshQuery canonical_query(const ChshQuery& q) {
    return {canonical_angle(q.theta1), canonical_angle(q.theta2), canonical_angle(q.delta)};
}

}  // namespace

double chsh_value(const CorrelationFamily& f, const ChshQuery& q) {
    return evaluate(f, q.theta1) + evaluate(f, q.theta2) + evaluate(f, q.theta1 - q.delta) -
           evaluate(f, q.theta2 - q.delta);
}

double generalized_bound(const CorrelationFamily& f) {
    return 4.0 * std::fabs(evaluate(f, 0.25 * kPi));
}

double stationarity_residual(const CorrelationFamily& f, const ChshQuery& q) {
    const double d1 = derivative(f, q.theta1);
    const double d2 = derivative(f, q.theta2);
    const double d1d = derivative(f, q.theta1 - q.delta);
    const double d2d = derivative(f, q.theta2 - q.delta);
    if (is_infinite(d1) || is_infinite(d2) || is_infinite(d1d) || is_infinite(d2d)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max({std::fabs(d1 + d1d), std::fabs(d2 - d2d), std::fabs(d2d - d1d)});
}

ChshResult optimize_chsh(const CorrelationFamily& f, int grid_n, double refine_tol) {
    if (grid_n < 16) throw std::invalid_argument("optimize_chsh: grid_n must be >= 16");
    if (!(refine_tol > 0.0)) throw std::invalid_argument("optimize_chsh: refine_tol must be > 0");

    const auto abs_f = [&f](const ChshQuery& q) { return std::fabs(chsh_value(f, q)); };

    // Coarse lattice scan. axis[i] - axis[k] = (i - k) * step exactly, so E
    // over the lattice needs only the two tables below.
    const double step = kTwoPi / grid_n;
    std::vector<double> axis(grid_n), ev(grid_n), ediff(2 * grid_n);
    for (int i = 0; i < grid_n; ++i) {
        axis[i] = -kPi + i * step;
        ev[i] = evaluate(f, axis[i]);
    }
    for (int d = 0; d < 2 * grid_n; ++d) ediff[d] = evaluate(f, (d - grid_n) * step);

    double best = -1.0;
    ChshQuery x{0.0, 0.0, 0.0};
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            for (int k = 0; k < grid_n; ++k) {
                const double v =
                    std::fabs(ev[i] + ev[j] + ediff[i - k + grid_n] - ediff[j - k + grid_n]);
                if (v > best) {
                    best = v;
                    x = {axis[i], axis[j], axis[k]};
                }
            }
        }
    }

    // Coordinate-wise golden-section refinement with a shrinking window.
    const auto with_coord = [](ChshQuery q, int c, double v) {
        (c == 0 ? q.theta1 : c == 1 ? q.theta2 : q.delta) = v;
        return q;
    };
    double w = step;
    const double bracket_tol = std::max(refine_tol * 1e-2, 1e-14);
    for (int pass = 0; pass < 200 && w > refine_tol; ++pass) {
        for (int c = 0; c < 3; ++c) {
            const double cur = c == 0 ? x.theta1 : c == 1 ? x.theta2 : x.delta;
            const double nv = golden_max(
                [&](double v) { return abs_f(with_coord(x, c, v)); }, cur - w, cur + w,
                bracket_tol);
            x = with_coord(x, c, nv);
        }
        w *= 0.5;
    }

    // Canonical representative: among the |F|-preserving images pick the
    // smallest |theta1|, preferring theta1 > 0. The negation image uses
    // evenness; the pi-shift image uses E(t + pi) = -E(t).
    x = canonical_query(x);
    const double target = abs_f(x);
    ChshQuery candidates[4] = {
        x,
        canonical_query({-x.theta1, -x.theta2, -x.delta}),
        canonical_query({x.theta1 + kPi, x.theta2 + kPi, x.delta}),
        canonical_query({-x.theta1 + kPi, -x.theta2 + kPi, -x.delta}),
    };
    ChshQuery pick = x;
    for (const auto& c : candidates) {
        if (std::fabs(abs_f(c) - target) > 1e-9 * (1.0 + target)) continue;
        const double da = std::fabs(c.theta1), db = std::fabs(pick.theta1);
        if (da < db - 1e-12 || (std::fabs(da - db) <= 1e-12 && c.theta1 > pick.theta1)) {
            pick = c;
        }
    }

    ChshResult r;
    r.query = pick;
    r.value = chsh_value(f, pick);
    r.bound = generalized_bound(f);
    r.stationarity_residual = stationarity_residual(f, pick);
    return r;
}

BoundCheck verify_bound(const CorrelationFamily& f, std::uint64_t samples, std::uint64_t seed) {
    const double bound = generalized_bound(f);
    BoundCheck check{true, {0.0, 0.0, 0.0}, -1.0};
    for (std::uint64_t k = 0; k < samples; ++k) {
        const ChshQuery q{-kPi + kTwoPi * uniform_unit(seed, 3 * k),
                          -kPi + kTwoPi * uniform_unit(seed, 3 * k + 1),
                          -kPi + kTwoPi * uniform_unit(seed, 3 * k + 2)};
        const double v = std::fabs(chsh_value(f, q));
        if (v > check.worst_value) {
            check.worst_value = v;
            check.worst = q;
        }
    }
    check.ok = check.worst_value <= bound + 1e-9;
    return check;
}

bool small_angle_dominance(const CorrelationFamily& f, int grid_n) {
    if (grid_n < 2) throw std::invalid_argument("small_angle_dominance: grid_n must be >= 2");
    const double ref = std::fabs(evaluate(f, 0.25 * kPi));
    const double hi = 0.25 * kPi - 1e-6;
    for (int i = 0; i < grid_n; ++i) {
        const double t = -hi + 2.0 * hi * i / (grid_n - 1);
        if (!(std::fabs(evaluate(f, t)) > ref)) return false;
    }
    return true;
}

}  // namespace bellsim
