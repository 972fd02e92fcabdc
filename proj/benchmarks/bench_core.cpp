#include <benchmark/benchmark.h>

#include "bellsim/bell_game.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/counter_rng.hpp"

using namespace bellsim;

static void BM_EvaluateCosine(benchmark::State& state) {
    const auto f = make_family("cosine");
    double t = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(f, t));
        t += 1e-6;
    }
}
BENCHMARK(BM_EvaluateCosine);

static void BM_EvaluatePower(benchmark::State& state) {
    const auto f = make_family("power:0.3333333333333333");
    double t = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(f, t));
        t += 1e-6;
    }
}
BENCHMARK(BM_EvaluatePower);

static void BM_Transform(benchmark::State& state) {
    const auto ctx = ModelContext::make(make_family("cosine"), kPi / 3);
    std::uint64_t i = 0;
    for (auto _ : state) {
        const double l = sample_lambda(ctx.family, uniform_unit(7, i++));
        benchmark::DoNotOptimize(transform(ctx, l));
    }
}
BENCHMARK(BM_Transform);

static void BM_Round(benchmark::State& state) {
    const auto ctx = ModelContext::make(make_family("power:0.3333333333333333"), -2 * kPi / 5);
    std::uint64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_round(ctx, uniform_unit(7, i), i));
        ++i;
    }
}
BENCHMARK(BM_Round);

static void BM_Simulate10k(benchmark::State& state) {
    const auto ctx = ModelContext::make(make_family("cosine"), kPi / 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(ctx, 10000, 42, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_Simulate10k)->Arg(1)->Arg(4);

static void BM_ChshValue(benchmark::State& state) {
    const auto f = make_family("cosine");
    ChshQuery q{0.7, -0.3, 1.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(chsh_value(f, q));
        q.delta += 1e-6;
    }
}
BENCHMARK(BM_ChshValue);

static void BM_OptimizeGrid32(benchmark::State& state) {
    const auto f = make_family("cosine");
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_chsh(f, 32, 1e-8));
    }
}
BENCHMARK(BM_OptimizeGrid32);

BENCHMARK_MAIN();
