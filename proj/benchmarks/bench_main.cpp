#include <benchmark/benchmark.h>

#include <numbers>

#include "squid_horizon/circuit.hpp"
#include "squid_horizon/experiments.hpp"
#include "squid_horizon/geometry.hpp"
#include "squid_horizon/lattice.hpp"

using namespace squid_horizon;

namespace {

circuit::SquidParams squid() {
    circuit::SquidParams s;
    s.junction.critical_current = 2e-6;
    s.junction.capacitance = circuit::capacitance_for_plasma_frequency(2e-6, 2.0 * std::numbers::pi * 1e12);
    s.loop_inductance = 1e-11;
    return s;
}

void BM_LatticeStepStatic(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const circuit::ArrayParams array{n, 0.25e-6, 5e-17, 50.0};
    lattice::SolverConfig cfg;
    cfg.boundary = lattice::Boundary::Absorbing;
    lattice::Lattice lat(array, squid(), bias::FluxField::uniform(0.1), cfg);
    auto s = lat.gaussian_packet({0.5 * n * array.cell_length, 40 * array.cell_length, 0.1, 1e-6, +1});
    for (auto _ : state) {
        lat.step(s);
        benchmark::DoNotOptimize(s.A.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_LatticeStepStatic)->Arg(1000)->Arg(4800)->Arg(20000);

void BM_LatticeStepMovingPulse(benchmark::State& state) {
    const auto setup = experiments::reference_setup();
    lattice::Lattice lat(setup.array, setup.squid, bias::FluxField::moving(setup.pulse), {});
    auto s = lat.zero_state();
    for (auto _ : state) {
        lat.step(s);
        benchmark::DoNotOptimize(s.A.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(setup.array.n_cells));
}
BENCHMARK(BM_LatticeStepMovingPulse);

void BM_ProfileAndHorizons(benchmark::State& state) {
    const auto setup = experiments::reference_setup();
    for (auto _ : state) {
        const auto profile = geometry::velocity_profile(setup.array, setup.squid, setup.pulse, 0.0);
        benchmark::DoNotOptimize(geometry::find_horizons(profile));
    }
}
BENCHMARK(BM_ProfileAndHorizons);

void BM_PhotonBudget(benchmark::State& state) {
    const auto setup = experiments::reference_setup();
    for (auto _ : state) {
        benchmark::DoNotOptimize(geometry::photons_per_pulse(setup.array, setup.squid, setup.pulse, 4800));
    }
}
BENCHMARK(BM_PhotonBudget);

void BM_Sweep(benchmark::State& state) {
    experiments::SweepSpec spec;
    spec.axes = {{"pulse.velocity_ratio", {0.9, 0.93, 0.95, 0.97}}, {"pulse.amplitude_phi0", {0.15, 0.2, 0.25}}};
    spec.outputs = {experiments::SweepOutput::HawkingTemperature, experiments::SweepOutput::PhotonCount};
    const auto workers = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(experiments::run_sweep(spec, workers));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
