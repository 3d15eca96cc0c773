// Serial reference kernels against their OpenMP counterparts.
// Thread count for the parallel variants comes from the benchmark argument.

#include "gethlab/classical.hpp"
#include "gethlab/microcan.hpp"
#include "gethlab/observables.hpp"
#include "gethlab/reference.hpp"
#include "gethlab/spectra.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <array>

using namespace gethlab;

namespace {

constexpr classical::Coupling kCoupling{1.0, -5.0};
constexpr std::array kKinds{observables::Kind::hopping12, observables::Kind::current, observables::Kind::imbalance};

struct ProjectionInput {
    spectra::SectorSet set;
    std::vector<spectra::DegenerateSubspace> subspaces;
};

const ProjectionInput& projection_input() {
    static const ProjectionInput in = [] {
        ProjectionInput p{spectra::solve_sectors({60, 1.0, -5.0}), {}};
        p.subspaces = spectra::assemble_subspaces(p.set.r1.energies, p.set.omega.energies).subspaces;
        return p;
    }();
    return in;
}

microcan::McConfig mc_config() {
    microcan::McConfig c;
    c.n_samples = 2'000'000;
    c.seed = 3;
    return c;
}

const std::vector<double>& mc_energies() {
    static const auto g = microcan::make_grid(-4.9, -0.7, 0.05);
    return g;
}

classical::IntegrationConfig short_integration() {
    classical::IntegrationConfig c;
    c.t_max = 100.0;
    c.t_transient = 10.0;
    return c;
}

constexpr classical::EnsembleConfig kEnsemble{-2.7, 0.05, 16, 5};

void BM_projection_serial(benchmark::State& state) {
    const auto& in = projection_input();
    for (auto _ : state) benchmark::DoNotOptimize(reference::project_subspaces(in.set, in.subspaces, kKinds));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.subspaces.size()));
}

void BM_projection_parallel(benchmark::State& state) {
    const auto& in = projection_input();
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(observables::project_subspaces(in.set, in.subspaces, kKinds));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.subspaces.size()));
}

void BM_mc_serial(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            reference::mc_grid(kCoupling, microcan::Observable::hopping12, mc_energies(), mc_config()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc_config().n_samples));
}

void BM_mc_parallel(benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(microcan::mc_grid(kCoupling, microcan::Observable::hopping12, mc_energies(), mc_config()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc_config().n_samples));
}

void BM_ensemble_serial(benchmark::State& state) {
    const auto cfg = short_integration();
    for (auto _ : state) benchmark::DoNotOptimize(reference::run_ensemble(kCoupling, kEnsemble, cfg));
    state.SetItemsProcessed(state.iterations() * kEnsemble.count);
}

void BM_ensemble_parallel(benchmark::State& state) {
    const auto cfg = short_integration();
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(classical::run_ensemble(kCoupling, kEnsemble, cfg));
    state.SetItemsProcessed(state.iterations() * kEnsemble.count);
}

void thread_counts(benchmark::internal::Benchmark* b) {
    const int max = omp_get_num_procs();
    for (int t = 1; t <= max; t *= 2) b->Arg(t);
    if ((max & (max - 1)) != 0) b->Arg(max);
}

}  // namespace

BENCHMARK(BM_projection_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_projection_parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_mc_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ensemble_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ensemble_parallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
