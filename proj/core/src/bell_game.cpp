// SPDX-License-Identifier: Apache-2.0
#include "bellsim/bell_game.hpp"

#include <ostream>
#include <stdexcept>
#include <thread>

#include "bellsim/angle.hpp"
#include "bellsim/counter_rng.hpp"
#include "bellsim/format.hpp"

namespace bellsim {

JointDistribution closed_form_distribution(const ModelContext& ctx) {
    const double e = evaluate(ctx.family, ctx.theta);
    const double same = 0.25 * (1.0 + e);
    const double diff = 0.25 * (1.0 - e);
    return {same, diff, diff, same};
}

RoundRecord run_round(const ModelContext& ctx, double u, std::uint64_t round_id) {
    RoundRecord r;
    r.round_id = round_id;
    r.lambda_a = sample_lambda(ctx.family, u);
    r.lambda_b = transform(ctx, r.lambda_a);
    r.s_a = response(r.lambda_a);
    r.s_b = response(r.lambda_b);
    return r;
}

SimulationSummary finalize_summary(std::uint64_t rounds, std::uint64_t seed, double theta,
                                   std::uint64_t n_pp, std::uint64_t n_pm, std::uint64_t n_mp,
                                   std::uint64_t n_mm) {
    SimulationSummary s;
    s.rounds = rounds;
    s.seed = seed;
    s.theta = theta;
    s.n_pp = n_pp;
    s.n_pm = n_pm;
    s.n_mp = n_mp;
    s.n_mm = n_mm;
    const double signed_sum = static_cast<double>(n_pp + n_mm) - static_cast<double>(n_pm + n_mp);
    s.correlation = signed_sum / static_cast<double>(rounds);
    return s;
}

SimulationSummary simulate(const ModelContext& ctx, std::uint64_t rounds, std::uint64_t seed,
                           int workers) {
    if (rounds < 1) throw std::invalid_argument("simulate: rounds must be >= 1");
    if (workers < 1) throw std::invalid_argument("simulate: workers must be >= 1");

    struct Tally {
        std::uint64_t pp = 0, pm = 0, mp = 0, mm = 0;
    };

    const auto run_chunk = [&ctx, seed](std::uint64_t lo, std::uint64_t hi, Tally& t) {
        for (std::uint64_t r = lo; r < hi; ++r) {
            const RoundRecord rec = run_round(ctx, uniform_unit(seed, r), r);
            if (rec.s_a > 0) {
                (rec.s_b > 0 ? t.pp : t.pm)++;
            } else {
                (rec.s_b > 0 ? t.mp : t.mm)++;
            }
        }
    };

    const std::uint64_t n_workers =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), rounds);
    std::vector<Tally> tallies(n_workers);
    if (n_workers == 1) {
        run_chunk(0, rounds, tallies[0]);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        const std::uint64_t chunk = (rounds + n_workers - 1) / n_workers;
        for (std::uint64_t w = 0; w < n_workers; ++w) {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min(rounds, lo + chunk);
            threads.emplace_back(run_chunk, lo, hi, std::ref(tallies[w]));
        }
        for (auto& t : threads) t.join();
    }

    Tally total;
    for (const auto& t : tallies) {
        total.pp += t.pp;
        total.pm += t.pm;
        total.mp += t.mp;
        total.mm += t.mm;
    }
    return finalize_summary(rounds, seed, ctx.theta, total.pp, total.pm, total.mp, total.mm);
}

std::vector<SweepPoint> reconstruct_correlation(const CorrelationFamily& f,
                                                const std::vector<double>& thetas,
                                                std::uint64_t rounds, std::uint64_t seed,
                                                int workers) {
    if (thetas.empty()) throw std::invalid_argument("reconstruct_correlation: empty theta list");
    std::vector<SweepPoint> out;
    out.reserve(thetas.size());
    for (double theta : thetas) {
        const auto ctx = ModelContext::make(f, theta);
        const auto summary = simulate(ctx, rounds, seed, workers);
        out.push_back({theta, summary.correlation, evaluate(f, theta)});
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "theta,empirical,closed_form\n";
    for (const auto& p : points) {
        out << format_sig(p.theta, 12) << ',' << format_sig(p.empirical, 12) << ','
            << format_sig(p.closed_form, 12) << '\n';
    }
}

}  // namespace bellsim
