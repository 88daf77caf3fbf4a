// Serial reference kernels against their OpenMP counterparts.
//
//   ./build/bench/bench_kernels --benchmark_filter=outer

#include <benchmark/benchmark.h>

#include "phaseborn/kernels.hpp"
#include "phaseborn/observable.hpp"

using namespace phaseborn;

namespace {

constexpr int kDim = 3;

CMatrix make_points(benchmark::State &state) {
    CMatrix pts(kDim, state.range(0));
    kernels::reference::fill_uniform_sphere(pts, 1);
    return pts;
}

template <bool Parallel> void BM_fill(benchmark::State &state) {
    CMatrix pts(kDim, state.range(0));
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::parallel::fill_uniform_sphere(pts, 7);
        } else {
            kernels::reference::fill_uniform_sphere(pts, 7);
        }
        benchmark::DoNotOptimize(pts.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel> void BM_outer(benchmark::State &state) {
    const CMatrix pts = make_points(state);
    const std::vector<double> w(static_cast<std::size_t>(pts.cols()), 1.0);
    for (auto _ : state) {
        auto m = Parallel ? kernels::parallel::outer_moments(pts, w)
                          : kernels::reference::outer_moments(pts, w);
        auto s = Parallel ? kernels::parallel::outer_spread(pts, w, m.mean)
                          : kernels::reference::outer_spread(pts, w, m.mean);
        benchmark::DoNotOptimize(s.real.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel> void BM_form(benchmark::State &state) {
    const CMatrix pts = make_points(state);
    const std::vector<double> w(static_cast<std::size_t>(pts.cols()), 1.0);
    CMatrix a = CMatrix::Random(kDim, kDim);
    const HermitianObservable obs((a + a.adjoint()) / 2.0);
    for (auto _ : state) {
        auto f = Parallel ? kernels::parallel::form_values(obs.matrix(), pts)
                          : kernels::reference::form_values(obs.matrix(), pts);
        auto m = Parallel ? kernels::parallel::scalar_moments(f.values, w)
                          : kernels::reference::scalar_moments(f.values, w);
        benchmark::DoNotOptimize(m.mean);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_fill<false>)->Name("fill/reference")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_fill<true>)->Name("fill/parallel")->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_outer<false>)->Name("outer/reference")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_outer<true>)->Name("outer/parallel")->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_form<false>)->Name("form/reference")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_form<true>)->Name("form/parallel")->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();

BENCHMARK_MAIN();
