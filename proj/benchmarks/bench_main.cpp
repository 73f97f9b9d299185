#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "plap/corpus.hpp"
#include "plap/function_spaces.hpp"
#include "plap/inequalities.hpp"
#include "plap/pde_solver.hpp"
#include "plap/regularity_analyzer.hpp"
#include "plap/tensor_models.hpp"

using namespace plap;

static void BM_Stress(benchmark::State& state) {
    ModelParams m;
    m.p = 3.0;
    const auto q = SymMatrix::from_upper(2, {0.3, -0.7, 1.1});
    for (auto _ : state) benchmark::DoNotOptimize(stress(q, m));
}
BENCHMARK(BM_Stress);

static void BM_NikolskiiSeminorm(benchmark::State& state) {
    const auto steps = static_cast<std::size_t>(state.range(0));
    const auto f = TimeGridFunction::sample([](double t) { return std::sin(7 * t) + std::abs(t - 0.3); }, 0.0,
                                            1.0 / static_cast<double>(steps), steps);
    SeminormSpec spec;
    spec.alpha = 0.5;
    spec.p = 2.0;
    spec.delta = 0.125;
    for (auto _ : state) benchmark::DoNotOptimize(nikolskii_seminorm(f, spec));
}
BENCHMARK(BM_NikolskiiSeminorm)->Arg(1024)->Arg(4096);

static void BM_SolverStep(benchmark::State& state) {
    const TorusGrid g(static_cast<int>(state.range(0)));
    ModelParams m;
    m.p = 3.0;
    Stepper stepper(g, m);
    const auto u0 = random_smooth(g, 3, 4, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(stepper.step(u0, 2e-3));
}
BENCHMARK(BM_SolverStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CorpusMember(benchmark::State& state) {
    CorpusOptions opt;
    opt.size = 4;
    const auto corpus = make_corpus(opt);
    CorpusCheckOptions co;
    co.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(check_corpus(corpus, co));
}
BENCHMARK(BM_CorpusMember)->Unit(benchmark::kMillisecond);

static void BM_Caccioppoli(benchmark::State& state) {
    const TorusGrid g(static_cast<int>(state.range(0)));
    ModelParams m;
    m.p = 3.0;
    const auto tr = solve(random_smooth(g, 7, 3, 2.0), 0.2, 4e-3, m);
    const double pi = 3.141592653589793;
    for (auto _ : state) benchmark::DoNotOptimize(check_theorem2(tr, pi, pi, 0.5, 0.75, 1, tr.steps(), 1.0));
}
BENCHMARK(BM_Caccioppoli)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
