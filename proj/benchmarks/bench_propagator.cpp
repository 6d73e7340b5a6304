#include <benchmark/benchmark.h>

#include "xstitch/dynamics.hpp"
#include "xstitch/propagator.hpp"

namespace {

using namespace xstitch;

SystemHamiltonian make_system(int n_cells) {
    LatticeConfig lattice;
    lattice.n_cells = n_cells;
    lattice.intra_hop = -2.4;
    return assemble_system(lattice, {small_emitter(n_cells / 2, -1.9, 0.1)});
}

// ----- single Chebyshev step at varying lattice size -----
void propagator_step(benchmark::State& state) {
    const auto sys = make_system(static_cast<int>(state.range(0)));
    ChebyshevPropagator prop(sys.matrix, 0.25);
    Eigen::VectorXcd psi = excited_emitter_state(sys, 0).amplitudes;
    for (auto _ : state) {
        prop.step(psi);
        benchmark::DoNotOptimize(psi.data());
    }
    state.counters["terms"] = prop.term_count();
}
BENCHMARK(propagator_step)->Arg(256)->Arg(1500)->Arg(4096)
    ->Unit(benchmark::kMicrosecond);

// ----- step cost growth with the time step (series length grows ~ dt) -----
void propagator_step_dt(benchmark::State& state) {
    const auto sys = make_system(1500);
    const double dt = state.range(0) / 10.0;
    ChebyshevPropagator prop(sys.matrix, dt);
    Eigen::VectorXcd psi = excited_emitter_state(sys, 0).amplitudes;
    for (auto _ : state) {
        prop.step(psi);
        benchmark::DoNotOptimize(psi.data());
    }
    state.counters["terms"] = prop.term_count();
}
BENCHMARK(propagator_step_dt)->Arg(1)->Arg(10)->Arg(50)
    ->Unit(benchmark::kMicrosecond);

// ----- whole trajectory including sampling overhead -----
void evolve_trajectory(benchmark::State& state) {
    const auto sys = make_system(1500);
    const auto initial = excited_emitter_state(sys, 0);
    for (auto _ : state) {
        const auto traj = evolve(sys, initial, {0.25, 200});
        benchmark::DoNotOptimize(traj.norm_sq.data());
    }
}
BENCHMARK(evolve_trajectory)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
