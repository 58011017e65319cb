#include "bethelab/recursion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bethelab/parallel.hpp"

namespace bethe {

static std::vector<std::size_t> level_sizes(int branching, int depth, Rooting rooting)
{
    std::vector<std::size_t> sizes;
    sizes.reserve(static_cast<std::size_t>(depth) + 1);
    sizes.push_back(1);
    for (int level = 1; level <= depth; ++level) {
        const std::size_t fanout =
            (level == 1 && rooting == Rooting::full_lattice_root)
                ? static_cast<std::size_t>(branching) + 1
                : static_cast<std::size_t>(branching);
        sizes.push_back(sizes.back() * fanout);
    }
    return sizes;
}

std::size_t TruncatedTree::count_vertices(int branching, int depth, Rooting rooting,
                                          std::size_t vertex_budget)
{
    if (branching < 2)
        throw std::invalid_argument("TruncatedTree: branching number M must be >= 2");
    if (depth < 0)
        throw std::invalid_argument("TruncatedTree: depth must be >= 0");
    std::size_t total = 0;
    std::size_t width = 1;
    for (int level = 0; level <= depth; ++level) {
        if (level > 0) {
            const std::size_t fanout =
                (level == 1 && rooting == Rooting::full_lattice_root)
                    ? static_cast<std::size_t>(branching) + 1
                    : static_cast<std::size_t>(branching);
            if (width > vertex_budget / fanout + 1)
                throw std::length_error("TruncatedTree: vertex budget exceeded at M=" +
                                        std::to_string(branching) + " D=" + std::to_string(depth));
            width *= fanout;
        }
        total += width;
        if (total > vertex_budget)
            throw std::length_error("TruncatedTree: vertex count " + std::to_string(total) +
                                    " exceeds budget " + std::to_string(vertex_budget));
    }
    return total;
}

TruncatedTree::TruncatedTree(int branching, int depth, Rooting rooting,
                             std::size_t vertex_budget)
    : branching_(branching), depth_(depth), rooting_(rooting)
{
    const std::size_t total = count_vertices(branching, depth, rooting, vertex_budget);
    const auto sizes = level_sizes(branching, depth, rooting);
    offsets_.resize(sizes.size() + 1, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i)
        offsets_[i + 1] = offsets_[i] + sizes[i];
    potentials_.assign(total, 0.0);
}

std::size_t TruncatedTree::child_begin(int level, std::size_t j) const
{
    const std::size_t fanout =
        (level == 0 && rooting_ == Rooting::full_lattice_root)
            ? static_cast<std::size_t>(branching_) + 1
            : static_cast<std::size_t>(branching_);
    return level_offset(level + 1) + j * fanout;
}

void TruncatedTree::fill_potentials(const PotentialDistribution& nu, CounterRng& rng)
{
    for (auto& q : potentials_)
        q = nu.sample(rng);
}

Complex green_value(const TruncatedTree& tree, double coupling, Complex lambda,
                    LeafPolicy policy, Complex leaf_fixed_point)
{
    const int depth = tree.depth();
    const int m = tree.branching();

    std::vector<Complex> values(tree.level_size(depth));
    const std::size_t leaf_offset = tree.level_offset(depth);
    if (depth == 0) {
        // single vertex: either the bare site or the free continuation
        if (policy == LeafPolicy::fixed_point)
            return leaf_fixed_point;
        return -1.0 / (lambda - coupling * tree.potential(0));
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        values[j] = (policy == LeafPolicy::fixed_point)
                        ? leaf_fixed_point
                        : -1.0 / (lambda - coupling * tree.potential(leaf_offset + j));
    }

    for (int level = depth - 1; level >= 0; --level) {
        const std::size_t width = tree.level_size(level);
        const std::size_t offset = tree.level_offset(level);
        const std::size_t fanout =
            (level == 0 && tree.rooting() == Rooting::full_lattice_root)
                ? static_cast<std::size_t>(m) + 1
                : static_cast<std::size_t>(m);
        std::vector<Complex> next(width);
        for (std::size_t j = 0; j < width; ++j) {
            Complex sum = 0.0;
            const std::size_t base = j * fanout;
            for (std::size_t c = 0; c < fanout; ++c)
                sum += values[base + c];
            next[j] = -1.0 / (sum + lambda - coupling * tree.potential(offset + j));
        }
        values = std::move(next);
    }
    return values[0];
}

static void check_green_preconditions(const SpectralParameter& lambda, double coupling,
                                      LeafPolicy policy)
{
    if (lambda.eta() > 0.0)
        return;
    if (policy != LeafPolicy::fixed_point || coupling != 0.0)
        throw std::domain_error(
            "green function at eta = 0 requires leaf policy fixed_point and k = 0");
}

UpperHalfPoint forward_green(const TruncatedTree& tree, double coupling,
                             const SpectralParameter& lambda, LeafPolicy policy)
{
    if (tree.rooting() != Rooting::forward_subtree)
        throw std::invalid_argument("forward_green: tree must be a forward subtree");
    check_green_preconditions(lambda, coupling, policy);
    const Complex z_fp = fixed_point(tree.branching(), lambda).value();
    return UpperHalfPoint(green_value(tree, coupling, lambda.value(), policy, z_fp));
}

UpperHalfPoint root_green(const TruncatedTree& tree, double coupling,
                          const SpectralParameter& lambda, LeafPolicy policy)
{
    if (tree.rooting() != Rooting::full_lattice_root)
        throw std::invalid_argument("root_green: tree must have a full lattice root");
    check_green_preconditions(lambda, coupling, policy);
    const Complex z_fp = fixed_point(tree.branching(), lambda).value();
    return UpperHalfPoint(green_value(tree, coupling, lambda.value(), policy, z_fp));
}

std::uint64_t population_dynamics_run(
    const TreeModel& model, const SpectralParameter& lambda,
    const PopulationConfig& config, std::uint64_t seed,
    const std::function<void(int sweep, std::span<const Complex> pool)>& observer)
{
    lambda.require_interior();
    if (config.pool_size == 0)
        throw std::invalid_argument("population_dynamics: pool_size must be >= 1");

    const std::size_t n = config.pool_size;
    const int m = model.branching;
    const Complex lam = lambda.value();
    const Complex z_fp = fixed_point(m, lambda).value();

    std::vector<Complex> pool(n, z_fp);
    std::vector<Complex> next(n);
    std::vector<std::uint64_t> chunk_flags((n + 4095) / 4096, 0);
    std::uint64_t flagged = 0;

    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        std::fill(chunk_flags.begin(), chunk_flags.end(), 0);
        run_chunked(n, 4096, config.workers, [&](const ChunkRange& range) {
            std::uint64_t local_flags = 0;
            for (std::size_t i = range.begin; i < range.end; ++i) {
                CounterRng rng(seed, static_cast<std::uint64_t>(sweep), i);
                Complex sum = 0.0;
                for (int c = 0; c < m; ++c)
                    sum += pool[rng.next_below(n)];
                const double q = model.potential.sample(rng);
                Complex z = -1.0 / (sum + lam - model.coupling * q);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !(z.imag() > 0.0)) {
                    z = z_fp;
                    ++local_flags;
                }
                next[i] = z;
            }
            chunk_flags[range.chunk_index] = local_flags;
        });
        for (const auto f : chunk_flags)
            flagged += f;
        pool.swap(next);
        if (observer)
            observer(sweep, pool);
    }
    return flagged;
}

std::vector<Complex> population_dynamics(const TreeModel& model,
                                         const SpectralParameter& lambda,
                                         const PopulationConfig& config,
                                         std::uint64_t seed)
{
    std::vector<Complex> final_pool;
    population_dynamics_run(model, lambda, config, seed,
                            [&](int sweep, std::span<const Complex> pool) {
                                if (sweep + 1 == config.iterations)
                                    final_pool.assign(pool.begin(), pool.end());
                            });
    if (final_pool.empty()) {
        // zero iterations: the pool is the initial condition
        final_pool.assign(config.pool_size, fixed_point(model.branching, lambda).value());
    }
    return final_pool;
}

} // namespace bethe
