#include <benchmark/benchmark.h>

#include "ncgspectra/dynamics.hpp"
#include "ncgspectra/eigh.hpp"
#include "ncgspectra/fuzzy_torus.hpp"
#include "ncgspectra/matrix.hpp"
#include "ncgspectra/spectral_analysis.hpp"

namespace {

void bm_dirac_build(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::dirac_fuzzy(n));
    }
    state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(bm_dirac_build)->Arg(2)->Arg(4)->Arg(8)->Complexity();

void bm_eigh_values(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto t = ncg::dirac_fuzzy(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::eigh_values(t.dirac));
    }
    state.SetComplexityN(static_cast<benchmark::IterationCount>(4 * n * n));
}
BENCHMARK(bm_eigh_values)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond)->Complexity();

void bm_eigh_full(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto t = ncg::dirac_fuzzy(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::eigh(t.dirac));
    }
    state.SetComplexityN(static_cast<benchmark::IterationCount>(4 * n * n));
}
BENCHMARK(bm_eigh_full)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond)->Complexity();

void bm_closed_form(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::fuzzy_spectrum_closed_form(n));
    }
}
BENCHMARK(bm_closed_form)->Arg(8)->Arg(32)->Arg(128);

void bm_kron(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const ncg::ComplexMatrix a = ncg::clock(n);
    const ncg::ComplexMatrix b = ncg::shift(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::kron(a, b));
    }
}
BENCHMARK(bm_kron)->Arg(4)->Arg(8)->Arg(16);

void bm_operator_norm(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto t = ncg::dirac_fuzzy(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::operator_norm(t.dirac));
    }
    state.SetComplexityN(static_cast<benchmark::IterationCount>(4 * n * n));
}
BENCHMARK(bm_operator_norm)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond)->Complexity();

void bm_spectral_action(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto t = ncg::dirac_fuzzy(n);
    const auto f = ncg::SpectralFunction::gaussian(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::spectral_action(t.dirac, f, 1.0));
    }
}
BENCHMARK(bm_spectral_action)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void bm_cluster(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto t = ncg::dirac_fuzzy(n);
    const auto ev = ncg::eigh_values(t.dirac);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ncg::cluster_multiplicities(ev, ncg::default_cluster_tol(1.0)));
    }
}
BENCHMARK(bm_cluster)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
