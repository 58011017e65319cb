#include <benchmark/benchmark.h>

#include <vector>

#include "bethelab/mu.hpp"
#include "bethelab/rng.hpp"

using namespace bethe;

static std::vector<UpperHalfPoint> tuple_of(int n, std::uint64_t seed)
{
    CounterRng rng(seed, 0, 0);
    std::vector<UpperHalfPoint> zs;
    for (int i = 0; i < n; ++i)
        zs.emplace_back(rng.normal() * 2.0, 0.5 + rng.uniform01());
    return zs;
}

static void Mu2(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto zs = tuple_of(m, 3);
    const SpectralParameter lam(0.5, 0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mu2(zs, 0.1, lam));
    }
}
BENCHMARK(Mu2)->DenseRange(2, 6);

static void Mu3p(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    const auto zs = tuple_of(2 * m - 1, 4);
    const SpectralParameter lam(0.5, 0.01);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mu3p(zs, 0.01, -0.01, 0.5, lam));
    }
}
BENCHMARK(Mu3p)->DenseRange(2, 6);

static void CertifyLemma21(benchmark::State& state)
{
    CertifySearchConfig cfg;
    cfg.samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_lemma21(2, 0.5, 2.0, cfg, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(CertifyLemma21)->Arg(1 << 12)->Arg(1 << 15);
