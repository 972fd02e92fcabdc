#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellsim/angle.hpp"
#include "bellsim/correlation_family.hpp"
#include "bellsim/format.hpp"
#include "support/oracles.hpp"

using namespace bellsim;

namespace {
const double kOneThird = 0.3333333333333333;
CorrelationFamily cosine() { return make_family("cosine"); }
CorrelationFamily power(double p) { return make_family("power:" + format_sig(p, 17)); }
}  // namespace

TEST_CASE("make_family: cosine") {
    const auto f = cosine();
    CHECK(f.name == "cosine");
    CHECK(!f.param.has_value());
    CHECK(evaluate(f, kPi / 4) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f.smooth_derivative);
    CHECK(f.spec() == "cosine");
}

TEST_CASE("make_family: power:1 coincides with cosine on a grid") {
    const auto f1 = power(1.0);
    const auto f0 = cosine();
    for (int i = 0; i <= 1000; ++i) {
        const double t = -kPi + kTwoPi * i / 1000.0;
        CHECK(std::fabs(evaluate(f1, t) - evaluate(f0, t)) < 1e-12);
    }
}

TEST_CASE("make_family: power:1/3 value at pi/4") {
    const auto f = power(kOneThird);
    // 2^(-1/6), evaluated in extended precision
    CHECK(evaluate(f, kPi / 4) == doctest::Approx(-0.89089871814033930).epsilon(1e-14));
}

TEST_CASE("make_family: rejects bad specs") {
    CHECK_THROWS_AS(make_family("power:-1"), std::invalid_argument);
    CHECK_THROWS_AS(make_family("power:0"), std::invalid_argument);
    CHECK_THROWS_AS(make_family("power:nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_family("power:"), std::invalid_argument);
    CHECK_THROWS_AS(make_family("gaussian"), std::invalid_argument);
    CHECK_THROWS_AS(make_family(""), std::invalid_argument);
}

TEST_CASE("evaluate endpoints and periodicity") {
    const auto f0 = cosine();
    CHECK(evaluate(f0, 0.0) == -1.0);
    CHECK(evaluate(f0, kPi) == 1.0);
    CHECK(evaluate(f0, -kPi) == 1.0);
    const auto f3 = power(kOneThird);
    CHECK(evaluate(f3, kPi / 3) == doctest::Approx(-0.79370052598409974).epsilon(1e-14));

    for (const auto& f : {f0, f3}) {
        for (int i = 0; i < 500; ++i) {
            const double t = -kPi + kTwoPi * i / 500.0;
            CHECK(std::fabs(evaluate(f, t) - evaluate(f, t + kTwoPi)) < 1e-12);
            CHECK(evaluate(f, t) >= -1.0);
            CHECK(evaluate(f, t) <= 1.0);
        }
    }
}

TEST_CASE("evaluate strictly increasing on [0, pi]") {
    for (const auto& f : {cosine(), power(kOneThird), power(0.1), power(2.0)}) {
        double prev = evaluate(f, 0.0);
        for (int i = 1; i <= 400; ++i) {
            const double t = kPi * i / 400.0;
            const double v = evaluate(f, t);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("derivative: analytic values") {
    const auto f = cosine();
    CHECK(derivative(f, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(derivative(f, kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(derivative(f, -kPi / 2) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("derivative: singular marker for power p<1 at +-pi/2") {
    const auto f = power(kOneThird);
    CHECK(is_infinite(derivative(f, kPi / 2)));
    CHECK(is_infinite(derivative(f, -kPi / 2)));
    CHECK(!is_infinite(derivative(f, kPi / 2 - 1e-3)));
    // p >= 1 has no singularity
    CHECK(!is_infinite(derivative(power(2.0), kPi / 2)));
    CHECK(derivative(power(2.0), kPi / 2) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("derivative: finite-difference fallback matches analytic") {
    auto f = cosine();
    auto stripped = f;
    stripped.deriv = nullptr;
    for (int i = 0; i < 100; ++i) {
        const double t = -kPi + kTwoPi * i / 100.0;
        CHECK(std::fabs(derivative(stripped, t) - derivative(f, t)) < 1e-8);
    }
}

TEST_CASE("chi: analytic inverse") {
    const auto f0 = cosine();
    CHECK(chi(f0, -1.0) == 0.0);
    CHECK(chi(f0, 0.0) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(chi(f0, 1.0) == doctest::Approx(kPi).epsilon(1e-14));
    const auto f3 = power(kOneThird);
    CHECK(chi(f3, -1.0) == 0.0);
    CHECK(chi(f3, -0.89089871814033930) == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK_THROWS_AS(chi(f0, 1.0000001), std::domain_error);
    CHECK_THROWS_AS(chi(f0, -1.1), std::domain_error);
    CHECK_THROWS_AS(chi(f0, std::nan("")), std::domain_error);
}

TEST_CASE("chi: bisection path agrees with the analytic inverse") {
    for (auto f : {cosine(), power(0.5), power(2.0)}) {
        auto stripped = f;
        stripped.inverse = nullptr;
        for (int i = 0; i <= 200; ++i) {
            const double e = -1.0 + 2.0 * i / 200.0;
            const double x = chi(stripped, e);
            CHECK(std::fabs(evaluate(f, x) - e) < 1e-10);  // value round trip
            CHECK(x >= 0.0);
            CHECK(x <= kPi);
        }
    }
}

TEST_CASE("chi round trips") {
    for (const auto& f : {cosine(), power(kOneThird), power(0.1)}) {
        for (int i = 0; i <= 1000; ++i) {
            const double e = -1.0 + 2.0 * i / 1000.0;
            CHECK(std::fabs(evaluate(f, chi(f, e)) - e) < 1e-10);
        }
        for (int i = 0; i <= 1000; ++i) {
            const double t = kPi * i / 1000.0;
            CHECK(std::fabs(chi(f, evaluate(f, t)) - t) < 1e-8);
        }
    }
}

TEST_CASE("validate: cosine passes") {
    const auto report = validate(cosine(), 10001);
    CHECK(report.passed);
    CHECK(report.violations.empty());
}

TEST_CASE("validate: power p <= 1 passes (singular points skipped)") {
    for (double p : {1.0, 0.75, 0.5, 0.3333333333333333, 0.1}) {
        const auto report = validate(power(p), 10001);
        INFO("p = ", p);
        CHECK(report.passed);
    }
}

TEST_CASE("validate: power:2 fails C4 with witness in (0, pi/2)") {
    const auto report = validate(power(2.0), 10001);
    CHECK(!report.passed);
    REQUIRE(report.violations.size() == 1);
    const auto& v = report.violations[0];
    CHECK(v.constraint == "C4");
    CHECK(v.witness > 0.0);
    CHECK(v.witness < kPi / 2);
    // E'' = p cos^{p-2}((1-p) sin^2 + cos^2) = 2 cos(2t) for p = 2: the
    // second difference at the witness must be genuinely negative.
    CHECK(v.magnitude > 1.0);
    const double h = 1e-4;
    const auto f = power(2.0);
    const double dd = (evaluate(f, v.witness + h) - 2 * evaluate(f, v.witness) +
                       evaluate(f, v.witness - h)) / (h * h);
    CHECK(dd < -1e-6);
    CHECK(dd == doctest::Approx(2 * std::cos(2 * v.witness)).epsilon(1e-4));
}

TEST_CASE("validate: rejects tiny grids") {
    CHECK_THROWS_AS(validate(cosine(), 2), std::invalid_argument);
}

TEST_CASE("validate: a deliberately asymmetric function fails C2") {
    auto f = cosine();
    f.eval = [](double t) { return -std::cos(t) + (t > 0 ? 1e-6 * t : 0.0); };
    f.deriv = nullptr;
    f.inverse = nullptr;
    const auto report = validate(f, 501);
    CHECK(!report.passed);
    bool has_c2 = false;
    for (const auto& v : report.violations) has_c2 |= (v.constraint == "C2");
    CHECK(has_c2);
}

TEST_CASE("E(pi/2) = 0 forced for validated families") {
    for (const auto& f : {cosine(), power(kOneThird), power(0.1)}) {
        CHECK(std::fabs(evaluate(f, kPi / 2)) < 1e-10);
    }
}

TEST_CASE("power-family bound value 4*2^{-p/2} decreases in p toward 4") {
    double prev = 4.0;  // supremum as p -> 0+
    for (double p : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
        const double b = 4.0 * std::fabs(evaluate(power(p), kPi / 4));
        CHECK(b == doctest::Approx(4.0 * std::pow(2.0, -p / 2)).epsilon(1e-14));
        CHECK(b < prev);
        prev = b;
    }
}
