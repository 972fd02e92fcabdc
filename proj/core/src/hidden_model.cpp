// SPDX-License-Identifier: Apache-2.0
#include "bellsim/hidden_model.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "bellsim/angle.hpp"
#include "bellsim/format.hpp"

namespace bellsim {
namespace {

// chi argument of branch k: x = E(theta), y = E(lambda). The theta < 0
// table is the theta >= 0 table reversed, a consequence of the map for
// negative angles being the reflection conjugate of the positive-angle one.
double branch_argument(double x, double y, bool theta_nonneg, int branch) {
    const double args_pos[4] = {-x - y + 1.0, x + y + 1.0, x - y - 1.0, -x + y - 1.0};
    return theta_nonneg ? args_pos[branch] : args_pos[3 - branch];
}

int branch_of(double theta, double lambda) {
    const auto b = branch_boundaries(theta);
    if (lambda < b[1]) return 0;
    if (lambda < b[2]) return 1;
    if (lambda < b[3]) return 2;
    return 3;
}

}  // namespace

ModelContext ModelContext::make(CorrelationFamily family, double theta, int validation_grid) {
    const auto report = validate(family, validation_grid);
    if (!report.passed) {
        std::string what = "family '" + family.spec() + "' is not admissible:";
        for (const auto& v : report.violations) {
            what += " " + v.constraint + "@" + format_sig(v.witness, 6);
        }
        throw std::invalid_argument(what);
    }
    return ModelContext{std::move(family), canonical_angle(theta)};
}

double density(const ModelContext& ctx, double lambda) {
    const double d = derivative(ctx.family, lambda);
    if (is_infinite(d)) return std::numeric_limits<double>::infinity();
    return 0.25 * std::fabs(d);
}

std::array<double, 4> branch_boundaries(double theta) {
    const double t = canonical_angle(theta);
    if (t >= 0.0) return {-kPi, t - kPi, 0.0, t};
    return {-kPi, t, 0.0, t + kPi};
}

double transform(const ModelContext& ctx, double lambda) {
    const double t = ctx.theta;
    const double l = canonical_angle(lambda);
    const int branch = branch_of(t, l);

    double arg = branch_argument(ctx.family.eval(t), ctx.family.eval(l), t >= 0.0, branch);
    const double slack = ctx.family.boundary_slack;
    if (arg > 1.0 || arg < -1.0) {
        if (arg > 1.0 + slack || arg < -1.0 - slack) {
            throw std::logic_error("transform: chi argument " + format_sig(arg, 17) +
                                   " out of range on branch " + std::to_string(branch) +
                                   " (theta=" + format_sig(t, 17) + ", lambda=" + format_sig(l, 17) +
                                   ")");
        }
        arg = arg > 1.0 ? 1.0 : -1.0;
    }
    const double L = q_sign(l - t) * chi(ctx.family, arg);
    return canonical_angle(-L);
}

double transform_branch(const ModelContext& ctx, double lambda, int branch) {
    if (branch < 0 || branch > 3) throw std::invalid_argument("transform_branch: branch in 0..3");
    const double t = ctx.theta;
    const double l = canonical_angle(lambda);

    double arg = branch_argument(ctx.family.eval(t), ctx.family.eval(l), t >= 0.0, branch);
    const double slack = ctx.family.boundary_slack;
    if (std::fabs(arg - 1.0) <= slack) {
        arg = 1.0;
    } else if (std::fabs(arg + 1.0) <= slack) {
        arg = -1.0;
    } else if (arg > 1.0 || arg < -1.0) {
        throw std::logic_error("transform_branch: chi argument " + format_sig(arg, 17) +
                               " out of range on branch " + std::to_string(branch));
    }
    const double L = q_sign(l - t) * chi(ctx.family, arg);
    return canonical_angle(-L);
}

double sample_lambda(const CorrelationFamily& f, double u) {
    if (!(u >= 0.0 && u < 1.0)) {
        throw std::domain_error("sample_lambda: u " + format_sig(u, 17) + " outside [0, 1)");
    }
    if (u < 0.5) return canonical_angle(-chi(f, 1.0 - 4.0 * u));
    return canonical_angle(chi(f, 4.0 * u - 3.0));
}

}  // namespace bellsim
