// SPDX-License-Identifier: Apache-2.0
#include "bellsim/correlation_family.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

#include "bellsim/angle.hpp"
#include "bellsim/format.hpp"

namespace bellsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CorrelationFamily make_cosine() {
    CorrelationFamily f;
    f.name = "cosine";
    f.eval = [](double t) { return -std::cos(t); };
    f.deriv = [](double t) { return std::sin(t); };
    f.inverse = [](double e) { return std::acos(-e); };
    f.smooth_derivative = true;
    f.boundary_slack = 1e-12;
    return f;
}

CorrelationFamily make_power(double p) {
    CorrelationFamily f;
    f.name = "power";
    f.param = p;
    f.eval = [p](double t) {
        double c = std::cos(t);
        return -std::copysign(std::pow(std::fabs(c), p), c);
    };
    f.deriv = [p](double t) {
        double c = std::cos(t);
        // The divergent points are the true zeros of cos; the nearest
        // double to +-pi/2 has |cos| ~ 6e-17, so detect by window.
        if (p < 1.0 && std::fabs(c) < 1e-12) {
            return std::copysign(kInf, std::sin(t));
        }
        return p * std::pow(std::fabs(c), p - 1.0) * std::sin(t);
    };
    f.inverse = [p](double e) {
        return std::acos(-std::copysign(std::pow(std::fabs(e), 1.0 / p), e));
    };
    f.smooth_derivative = p >= 1.0;
    f.boundary_slack = p < 1.0 ? 1e-12 + 4.0 * std::pow(2e-15, p) : 1e-12;
    return f;
}

}  // namespace

std::string CorrelationFamily::spec() const {
    if (!param) return name;
    return name + ":" + format_sig(*param, 17);
}

CorrelationFamily make_family(const std::string& spec) {
    if (spec == "cosine") return make_cosine();
    constexpr const char* prefix = "power:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string body = spec.substr(6);
        double p = 0.0;
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
        if (ec != std::errc{} || ptr != body.data() + body.size()) {
            throw std::invalid_argument("bad power exponent '" + body + "' in family spec");
        }
        if (!std::isfinite(p) || p <= 0.0) {
            throw std::invalid_argument("power exponent must be finite and > 0, got '" + body + "'");
        }
        return make_power(p);
    }
    throw std::invalid_argument("unknown correlation family '" + spec + "'");
}

double evaluate(const CorrelationFamily& f, double theta) {
    return f.eval(canonical_angle(theta));
}

double derivative(const CorrelationFamily& f, double theta) {
    const double t = canonical_angle(theta);
    double v;
    if (f.deriv) {
        v = f.deriv(t);
    } else {
        const double h = 1e-6;
        v = (evaluate(f, t + h) - evaluate(f, t - h)) / (2.0 * h);
    }
    if (std::fabs(v) > kDerivativeInfinityThreshold) return std::copysign(kInf, v);
    return v;
}

double chi(const CorrelationFamily& f, double e) {
    if (!(e >= -1.0 && e <= 1.0)) {
        throw std::domain_error("chi argument " + format_sig(e, 17) + " outside [-1, +1]");
    }
    if (f.inverse) {
        double x = f.inverse(e);
        if (x < 0.0) x = 0.0;
        if (x > kPi) x = kPi;
        return x;
    }
    // E is strictly increasing on [0, pi], so bisection converges.
    double lo = 0.0, hi = kPi;
    double mid = 0.5 * kPi;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double v = f.eval(canonical_angle(mid));
        if (std::fabs(v - e) < 1e-12) return mid;
        if (v < e) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

ValidationReport validate(const CorrelationFamily& f, int grid_n) {
    if (grid_n < 3) throw std::invalid_argument("validate: grid_n must be >= 3");

    struct Worst {
        bool hit = false;
        double witness = 0.0;
        double magnitude = 0.0;
        void offer(double w, double m) {
            if (!hit || m > magnitude) {
                hit = true;
                witness = w;
                magnitude = m;
            }
        }
    };
    Worst worst[4];

    const double c1 = std::fabs(evaluate(f, 0.0) + 1.0);
    if (c1 >= 1e-10) worst[0].offer(0.0, c1);

    const double kEps = 1e-3;
    for (int i = 0; i < grid_n; ++i) {
        const double t = static_cast<double>(i + 1) * kPi / (grid_n + 1);
        if (is_infinite(derivative(f, t))) continue;  // singular point

        const double c2 = std::fabs(evaluate(f, -t) - evaluate(f, t));
        if (c2 >= 1e-10) worst[1].offer(t, c2);

        const double c3 = std::fabs(evaluate(f, kPi - t) + evaluate(f, t));
        if (c3 >= 1e-10) worst[2].offer(t, c3);

        if (t > kEps && t < 0.5 * kPi - kEps) {
            const double h = 1e-4;
            const double dd =
                (evaluate(f, t + h) - 2.0 * evaluate(f, t) + evaluate(f, t - h)) / (h * h);
            if (!(dd > -1e-6)) worst[3].offer(t, -dd);
        }
    }

    ValidationReport report;
    static const char* ids[4] = {"C1", "C2", "C3", "C4"};
    for (int k = 0; k < 4; ++k) {
        if (worst[k].hit) {
            report.violations.push_back({ids[k], worst[k].witness, worst[k].magnitude});
        }
    }
    report.passed = report.violations.empty();
    return report;
}

}  // namespace bellsim
