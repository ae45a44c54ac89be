#include <benchmark/benchmark.h>

#include "gmlab/analytic.hpp"
#include "gmlab/grid.hpp"
#include "gmlab/solver.hpp"
#include "gmlab/spectrum.hpp"
#include "gmlab/verifier.hpp"

using namespace gmlab;

static void BM_ConstantState(benchmark::State& st) {
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    double sigma = 0.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(constant_state(e, sigma));
        sigma = sigma > 10 ? 0.0 : sigma + 0.37;
    }
}
BENCHMARK(BM_ConstantState);

static void BM_KThresholds(benchmark::State& st) {
    const ExponentSet e = ExponentSet::make(2, 4, 2, 4);
    const double sigma = static_cast<double>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(k_thresholds(e, sigma));
}
BENCHMARK(BM_KThresholds)->Arg(0)->Arg(1)->Arg(1000);

static void BM_RectangleSpectrum(benchmark::State& st) {
    const auto geom = DomainGeometry::rectangle(1.0, 1.3);
    for (auto _ : st) benchmark::DoNotOptimize(neumann_eigenvalues(geom, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_RectangleSpectrum)->Arg(100)->Arg(1000);

static void BM_CertifiedParity(benchmark::State& st) {
    const ExponentSet e = ExponentSet::make(2, 1, 2, 0);
    const auto geom = DomainGeometry::rectangle(1.0, 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(certified_parity(e, 0.0, 1e-3, 10.0, geom));
}
BENCHMARK(BM_CertifiedParity);

namespace {
const ModelParams kSpike = ModelParams::make(ExponentSet::make(2, 1, 2, 0), 1e-3, 10.0, 0.0);
}

static void BM_Residual(benchmark::State& st) {
    const Grid g = Grid::interval(1.0, static_cast<int>(st.range(0)));
    const SolutionField f = initial_guess(GuessKind::Spike, g, kSpike);
    for (auto _ : st) benchmark::DoNotOptimize(residual(f, kSpike));
    st.SetItemsProcessed(st.iterations() * g.size());
}
BENCHMARK(BM_Residual)->Arg(401)->Arg(4001);

static void BM_Jacobian(benchmark::State& st) {
    const int n = static_cast<int>(st.range(0));
    const Grid g = n > 0 ? Grid::interval(1.0, n) : Grid::rectangle(1.0, 1.0, 129, 129);
    const SolutionField f = initial_guess(GuessKind::Spike, g, kSpike);
    for (auto _ : st) benchmark::DoNotOptimize(jacobian(f.grid, f.u, f.v, kSpike));
}
BENCHMARK(BM_Jacobian)->Arg(401)->Arg(0);

static void BM_NewtonSpike1D(benchmark::State& st) {
    const Grid g = Grid::interval(1.0, static_cast<int>(st.range(0)));
    const NewtonResult warm =
        find_steady_state(initial_guess(GuessKind::Spike, g, kSpike), kSpike, {.newton = {}, .march_first = true});
    SolutionField start = warm.field;
    for (int i = 0; i < start.u.size(); ++i) start.u[i] *= 1.0 + 0.01 * ((i % 7) - 3) / 3.0;
    for (auto _ : st) benchmark::DoNotOptimize(newton_solve(start, kSpike));
}
BENCHMARK(BM_NewtonSpike1D)->Arg(401)->Unit(benchmark::kMillisecond);

static void BM_FindSteadyStateSpike(benchmark::State& st) {
    const Grid g = Grid::interval(1.0, 401);
    const SolutionField guess = initial_guess(GuessKind::Spike, g, kSpike);
    for (auto _ : st)
        benchmark::DoNotOptimize(find_steady_state(guess, kSpike, {.newton = {}, .march_first = true}));
}
BENCHMARK(BM_FindSteadyStateSpike)->Unit(benchmark::kMillisecond);

static void BM_VerifySolution(benchmark::State& st) {
    const Grid g = Grid::interval(1.0, 401);
    const NewtonResult res =
        find_steady_state(initial_guess(GuessKind::Spike, g, kSpike), kSpike, {.newton = {}, .march_first = true});
    for (auto _ : st) benchmark::DoNotOptimize(verify_solution(res.field, kSpike));
}
BENCHMARK(BM_VerifySolution)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
