// Test-side oracles, kept independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bellsim/angle.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/correlation_family.hpp"

namespace oracle {

/// chi by plain bisection on [0, pi]; never touches the analytic inverse.
inline double chi_bisect(const std::function<double(double)>& eval, double e,
                         double tol = 1e-14) {
    double lo = 0.0, hi = bellsim::kPi;
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        (eval(mid) < e ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Brute-force branch evaluator for the transformation law, written as an
/// explicit interval table straight from the two piecewise displays, with
/// chi via bisection. Independent of bellsim::transform's code path.
inline double transform_oracle(const bellsim::CorrelationFamily& f, double theta, double lambda) {
    using bellsim::canonical_angle;
    const double th = canonical_angle(theta);
    const double l = canonical_angle(lambda);
    const auto E = [&f](double t) { return f.eval(canonical_angle(t)); };

    struct Branch {
        double lo, hi;  // [lo, hi)
        double sx, sy, c;  // argument = sx*E(theta) + sy*E(lambda) + c
    };
    std::vector<Branch> table;
    if (th >= 0.0) {
        table = {{-bellsim::kPi, th - bellsim::kPi, -1, -1, +1},
                 {th - bellsim::kPi, 0.0, +1, +1, +1},
                 {0.0, th, +1, -1, -1},
                 {th, bellsim::kPi, -1, +1, -1}};
    } else {
        table = {{-bellsim::kPi, th, -1, +1, -1},
                 {th, 0.0, +1, -1, -1},
                 {0.0, th + bellsim::kPi, +1, +1, +1},
                 {th + bellsim::kPi, bellsim::kPi, -1, -1, +1}};
    }
    for (const auto& b : table) {
        if (!(l >= b.lo && l < b.hi)) continue;
        double arg = b.sx * E(th) + b.sy * E(l) + b.c;
        arg = std::clamp(arg, -1.0, 1.0);
        const double q = canonical_angle(l - th) >= 0.0 ? 1.0 : -1.0;
        return canonical_angle(-q * chi_bisect(f.eval, arg));
    }
    throw std::logic_error("transform_oracle: lambda not covered by the interval table");
}

/// Kolmogorov-Smirnov statistic of samples against an analytic CDF.
/// Sorts its argument.
inline double ks_statistic(std::vector<double>& samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        d = std::max(d, std::max((i + 1) / n - c, c - i / n));
    }
    return d;
}

/// Plain dense lattice max of |F| (no refinement): independent check of the
/// optimizer's global search.
inline double dense_grid_max(const bellsim::CorrelationFamily& f, int n) {
    const double step = bellsim::kTwoPi / n;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t1 = -bellsim::kPi + i * step;
        for (int j = 0; j < n; ++j) {
            const double t2 = -bellsim::kPi + j * step;
            for (int k = 0; k < n; ++k) {
                const double d = -bellsim::kPi + k * step;
                const double v = std::fabs(bellsim::evaluate(f, t1) + bellsim::evaluate(f, t2) +
                                           bellsim::evaluate(f, t1 - d) -
                                           bellsim::evaluate(f, t2 - d));
                best = std::max(best, v);
            }
        }
    }
    return best;
}

/// Central-difference gradient of the CHSH functional.
inline std::array<double, 3> chsh_gradient_fd(const bellsim::CorrelationFamily& f,
                                              const bellsim::ChshQuery& q, double h = 1e-6) {
    const auto F = [&f](bellsim::ChshQuery x) { return bellsim::chsh_value(f, x); };
    std::array<double, 3> g{};
    {
        auto a = q, b = q;
        a.theta1 += h;
        b.theta1 -= h;
        g[0] = (F(a) - F(b)) / (2 * h);
    }
    {
        auto a = q, b = q;
        a.theta2 += h;
        b.theta2 -= h;
        g[1] = (F(a) - F(b)) / (2 * h);
    }
    {
        auto a = q, b = q;
        a.delta += h;
        b.delta -= h;
        g[2] = (F(a) - F(b)) / (2 * h);
    }
    return g;
}

}  // namespace oracle
