#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bethelab/halfplane.hpp"
#include "bethelab/io.hpp"
#include "bethelab/model.hpp"
#include "bethelab/recursion.hpp"

namespace bethe {

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double max_observed = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t flagged = 0;
    std::uint64_t bound_violations = 0; // abs-moment estimator only
    double p = 0.0;
    double energy = 0.0;
    double eta = 0.0;
    double coupling = 0.0;
    int branching = 0;
};

enum class SamplerKind { full_tree, population };

struct SamplerConfig {
    SamplerKind kind = SamplerKind::population;
    // full_tree sampler: independent depth-limited realizations
    int depth = 12;
    LeafPolicy policy = LeafPolicy::fixed_point;
    std::uint64_t tree_samples = 10'000;
    // population sampler: pooled fixed-point iteration, statistics taken
    // over the trailing sample_window sweeps
    std::size_t pool_size = 10'000;
    int iterations = 1'300;
    int sample_window = 300;
    int workers = 1;
};

// Monte-Carlo mean of w^{1+p}(G^x(lambda)) over independent realizations.
// Samples whose Green value collapses to the boundary numerically are
// flagged and excluded; the run aborts if the flagged fraction exceeds 1e-6.
MomentEstimate estimate_weight_moment(const TreeModel& model, const SpectralParameter& lambda,
                                      double p, const SamplerConfig& sampler,
                                      std::uint64_t seed);

// Monte-Carlo mean of |G(lambda)|^{1+p} at the full-lattice root (M + 1
// forward subtrees).  Each sample is checked against
// |G| <= 4 Im(z_lambda) w(G) + 2 |z_lambda|; violations are counted.
MomentEstimate estimate_abs_moment(const TreeModel& model, const SpectralParameter& lambda,
                                   double p, const SamplerConfig& sampler,
                                   std::uint64_t seed);

struct SweepGrid {
    std::vector<double> energies;
    std::vector<double> etas;      // all > 0
    std::vector<double> couplings;
    double p = 0.5;
};

struct SweepCell {
    MomentEstimate estimate;
    bool failed = false;
    std::string error;
};

// One weight-moment estimate per (coupling, energy, eta) cell, in that loop
// order.  The per-cell seed is derived from (seed, coupling index, energy
// index) but not from eta, so the eta ladder reuses identical draws and the
// ladder trend is not washed out by independent sampling noise.  Failed
// cells carry their error and the sweep continues.
std::vector<SweepCell> sweep_weight_moment(const TreeModel& base, const SweepGrid& grid,
                                           const SamplerConfig& sampler, std::uint64_t seed);

// CSV with columns M,k,p,energy,eta,samples,mean,std_error,max_observed,flagged
// prefixed by the config echo comment block.
std::string sweep_csv(const std::vector<SweepCell>& cells, const ConfigEcho& echo);

} // namespace bethe
