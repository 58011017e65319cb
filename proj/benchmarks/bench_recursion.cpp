#include <benchmark/benchmark.h>

#include "bethelab/oracle.hpp"
#include "bethelab/recursion.hpp"

using namespace bethe;

static void ForwardGreen(benchmark::State& state)
{
    const int depth = static_cast<int>(state.range(0));
    TruncatedTree tree(2, depth, Rooting::forward_subtree);
    CounterRng rng(1, 0, 0);
    tree.fill_potentials(PotentialDistribution::uniform_symmetric(1.0), rng);
    const SpectralParameter lam(0.5, 0.01);
    for (auto _ : state) {
        auto g = forward_green(tree, 0.3, lam, LeafPolicy::truncate);
        benchmark::DoNotOptimize(g);
    }
    state.SetComplexityN(static_cast<std::int64_t>(tree.vertex_count()));
}
BENCHMARK(ForwardGreen)->DenseRange(4, 14, 2)->Complexity();

static void ResolventOracle(benchmark::State& state)
{
    const int depth = static_cast<int>(state.range(0));
    TruncatedTree tree(2, depth, Rooting::forward_subtree);
    CounterRng rng(1, 0, 0);
    tree.fill_potentials(PotentialDistribution::uniform_symmetric(1.0), rng);
    const SpectralParameter lam(0.5, 0.01);
    for (auto _ : state) {
        auto g = resolvent_oracle(tree, 0.3, lam);
        benchmark::DoNotOptimize(g);
    }
    state.SetComplexityN(static_cast<std::int64_t>(tree.vertex_count()));
}
BENCHMARK(ResolventOracle)->DenseRange(4, 12, 2)->Complexity();

static void PopulationSweep(benchmark::State& state)
{
    const TreeModel model(2, 0.1, PotentialDistribution::uniform_symmetric(1.0));
    const SpectralParameter lam(1.0, 1e-3);
    PopulationConfig cfg;
    cfg.pool_size = static_cast<std::size_t>(state.range(0));
    cfg.iterations = 1;
    for (auto _ : state) {
        auto pool = population_dynamics(model, lam, cfg, 7);
        benchmark::DoNotOptimize(pool);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(PopulationSweep)->Range(1 << 10, 1 << 16);
