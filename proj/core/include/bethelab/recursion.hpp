#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bethelab/halfplane.hpp"
#include "bethelab/model.hpp"

namespace bethe {

enum class Rooting { forward_subtree, full_lattice_root };

// How the recursion is seeded at the deepest level: fixed_point plants the
// free-lattice value z_lambda at every leaf, truncate cuts the lattice and
// uses the one-site value -1/(lambda - k q).  truncate matches the finite
// matrix resolvent exactly and therefore requires eta > 0.
enum class LeafPolicy { fixed_point, truncate };

// Cayley tree cut at a finite depth, potentials stored per vertex in
// breadth-first order.  A forward_subtree has M children everywhere; a
// full_lattice_root has M + 1 children at the root and M elsewhere.
class TruncatedTree {
public:
    static constexpr std::size_t default_vertex_budget = std::size_t{1} << 24;

    TruncatedTree(int branching, int depth, Rooting rooting,
                  std::size_t vertex_budget = default_vertex_budget);

    static std::size_t count_vertices(int branching, int depth, Rooting rooting,
                                      std::size_t vertex_budget = default_vertex_budget);

    int branching() const { return branching_; }
    int depth() const { return depth_; }
    Rooting rooting() const { return rooting_; }
    std::size_t vertex_count() const { return potentials_.size(); }

    int levels() const { return depth_ + 1; }
    std::size_t level_offset(int level) const { return offsets_[static_cast<std::size_t>(level)]; }
    std::size_t level_size(int level) const
    {
        return offsets_[static_cast<std::size_t>(level) + 1] - offsets_[static_cast<std::size_t>(level)];
    }
    // Children of the j-th vertex of `level` start at index j*M of level+1.
    std::size_t child_begin(int level, std::size_t j) const;

    double potential(std::size_t v) const { return potentials_[v]; }
    void set_potential(std::size_t v, double q) { potentials_[v] = q; }
    std::span<const double> potentials() const { return potentials_; }
    void fill_potentials(const PotentialDistribution& nu, CounterRng& rng);

private:
    int branching_;
    int depth_;
    Rooting rooting_;
    std::vector<std::size_t> offsets_; // levels() + 1 entries
    std::vector<double> potentials_;
};

// Forward Green function G^x at the root of a forward subtree, evaluated
// iteratively from the leaves.  Preconditions: eta > 0, or eta = 0 with
// policy fixed_point and coupling 0.
UpperHalfPoint forward_green(const TruncatedTree& tree, double coupling,
                             const SpectralParameter& lambda, LeafPolicy policy);

// Root Green function G combining the M + 1 forward values at the root of a
// full_lattice_root tree.
UpperHalfPoint root_green(const TruncatedTree& tree, double coupling,
                          const SpectralParameter& lambda, LeafPolicy policy);

// Unchecked kernel shared with the samplers; may return a non-finite value
// on numerical boundary collapse, which callers flag.
Complex green_value(const TruncatedTree& tree, double coupling, Complex lambda,
                    LeafPolicy policy, Complex leaf_fixed_point);

struct PopulationConfig {
    std::size_t pool_size = 10'000;
    int iterations = 1'000;
    int workers = 1;
};

// Pooled sampler for the distributional fixed point of the recursion: each
// sweep rebuilds the pool from a frozen snapshot, drawing M members and one
// potential per slot from streams keyed by (seed, sweep, slot).
// The observer sees the fresh pool after every sweep; the return value is
// the number of slots that collapsed numerically and were reset to z_lambda.
std::uint64_t population_dynamics_run(
    const TreeModel& model, const SpectralParameter& lambda,
    const PopulationConfig& config, std::uint64_t seed,
    const std::function<void(int sweep, std::span<const Complex> pool)>& observer);

// Convenience wrapper returning the final pool.
std::vector<Complex> population_dynamics(const TreeModel& model,
                                         const SpectralParameter& lambda,
                                         const PopulationConfig& config,
                                         std::uint64_t seed);

} // namespace bethe
