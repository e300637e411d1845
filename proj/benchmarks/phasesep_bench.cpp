// Microbenchmarks for the hot paths: threshold root finding, certificate
// construction, closed-form propagation, and the grid integrator.  Run the
// binary directly (not through ctest); pass --benchmark_filter=grid to focus
// on the PDE kernels.

#include <phasesep/bipartite.hpp>
#include <phasesep/phase_space.hpp>
#include <phasesep/single_particle.hpp>
#include <phasesep/solver.hpp>
#include <phasesep/wigner_grid.hpp>

#include <benchmark/benchmark.h>

using namespace phasesep;

namespace {

const PhysicalParams kUnit = PhysicalParams::dimensionless();

void bm_general_threshold(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(general_threshold(1.0).t_bar);
    }
}
BENCHMARK(bm_general_threshold);

void bm_optimize_squeezing(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_s(0.5, 1.5).first);
    }
}
BENCHMARK(bm_optimize_squeezing);

void bm_worst_case_pair(benchmark::State& state) {
    const SolverSettings fast = SolverSettings::fast();
    for (auto _ : state) {
        benchmark::DoNotOptimize(worst_case_epr(fast).second.t_bar);
    }
}
BENCHMARK(bm_worst_case_pair);

void bm_certificate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(separation_certificate(1.4, 0.9).det_b);
    }
}
BENCHMARK(bm_certificate);

void bm_closed_form_evolve(benchmark::State& state) {
    const GaussianState st = GaussianState::one_mode({0.3, -0.2}, {0.5, 0.5, 0.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(st, 1.0, kUnit).cov(0, 0));
    }
}
BENCHMARK(bm_closed_form_evolve);

void bm_pair_criteria(benchmark::State& state) {
    const FactoredBipartiteState f = make_epr_state(1.0, 0.5, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(criterion_report(f).ph_separable);
    }
}
BENCHMARK(bm_pair_criteria);

void bm_rasterize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GaussianState st = GaussianState::one_mode({0.0, 0.0}, {0.5, 0.5, 0.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rasterize(st, n, n, 10.0, 10.0).values(0, 0));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_rasterize)->Arg(256)->Arg(512);

void bm_grid_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GaussianState st = GaussianState::one_mode({0.0, 0.0}, {0.5, 0.5, 0.0});
    const WignerGrid grid = rasterize(st, n, n, 10.0, 10.0);
    // Wide enough that the diffusion kernel resolves on the 256-point axis.
    const double dt = 5e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(step_pde(grid, dt, kUnit).values(0, 0));
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_grid_step)->Arg(256)->Arg(512);

void bm_grid_moments(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GaussianState st = GaussianState::one_mode({0.0, 0.0}, {0.5, 0.5, 0.0});
    const WignerGrid grid = rasterize(st, n, n, 10.0, 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(moments(grid).mass);
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(bm_grid_moments)->Arg(256)->Arg(512);

void bm_fringe_amplitude(benchmark::State& state) {
    const GaussianMixtureState cat = make_cat_state(8.0);
    const WignerGrid grid = rasterize(cat, 512, 512, 10.0, 10.0);
    const Eigen::Vector2d probe(8.0, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fringe_amplitude(grid, probe));
    }
    state.SetItemsProcessed(state.iterations() * 512 * 512);
}
BENCHMARK(bm_fringe_amplitude);

}  // namespace

BENCHMARK_MAIN();
