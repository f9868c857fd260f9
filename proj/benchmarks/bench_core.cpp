#include <benchmark/benchmark.h>

#include "qrabi/dynamics.hpp"
#include "qrabi/fockspace.hpp"
#include "qrabi/gaussian.hpp"
#include "qrabi/meanfield.hpp"

namespace {

qrabi::ModelParams bistable_point() {
    qrabi::ModelParams p;
    p.tau = 3.3;
    p.g_tilde = 0.7;
    p.kappa = 3.0;
    p.gamma_tilde = 0.5;
    return p;
}

void BM_ClassifyPhase(benchmark::State& state) {
    const auto p = bistable_point();
    for (auto _ : state) benchmark::DoNotOptimize(qrabi::meanfield::classify_phase(p));
}
BENCHMARK(BM_ClassifyPhase);

void BM_SrpCoeffs(benchmark::State& state) {
    const auto p = bistable_point();
    const auto roots = qrabi::meanfield::sz_candidates(p);
    const auto states = qrabi::meanfield::solve_xy(p, roots.front());
    for (auto _ : state)
        benchmark::DoNotOptimize(qrabi::gaussian::srp_coeffs(p, states.front()));
}
BENCHMARK(BM_SrpCoeffs);

void BM_Trajectory(benchmark::State& state) {
    const auto p = bistable_point();
    qrabi::dynamics::IntegrateOptions opt;
    opt.t_max = 50.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(qrabi::dynamics::integrate(p, {0.5, 0.1}, -1, opt));
}
BENCHMARK(BM_Trajectory);

void BM_SteadyState(benchmark::State& state) {
    auto p = bistable_point();
    p.tau = 5.0;
    p.g_tilde = 0.3;
    const qrabi::fockspace::HilbertConfig h{static_cast<int>(state.range(0)), 50.0};
    const auto liouv = qrabi::fockspace::build_liouvillian(p, h);
    for (auto _ : state)
        benchmark::DoNotOptimize(qrabi::fockspace::steady_state(liouv, h.dim()));
}
BENCHMARK(BM_SteadyState)->Arg(15)->Arg(25);

}  // namespace

BENCHMARK_MAIN();
