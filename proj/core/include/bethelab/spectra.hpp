#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bethelab/halfplane.hpp"
#include "bethelab/io.hpp"
#include "bethelab/model.hpp"
#include "bethelab/moments.hpp"

namespace bethe {

struct DosCurve {
    std::vector<double> energies;
    std::vector<double> density;
    std::vector<double> std_error; // zero for the closed-form free curve
    double eta = 0.0;
    double coupling = 0.0;
    int branching = 0;
    std::uint64_t samples = 0;
};

// Root Green function of the free lattice, G = -1/((M+1) z_lambda + lambda).
Complex free_root_green(int branching, const SpectralParameter& lambda);

// Band edges of sigma(Delta) = [-2 sqrt(M), 2 sqrt(M)].
double band_edge(int branching);

// Closed-form free density of states rho(E) = (1/pi) Im G(E); zero outside
// the band.
DosCurve dos_free(int branching, std::span<const double> energies);

// Monte-Carlo density of states at small eta > 0: pointwise mean of
// (1/pi) Im G over full-lattice-root realizations.
DosCurve dos_disordered(const TreeModel& model, std::span<const double> energies, double eta,
                        const SamplerConfig& sampler, std::uint64_t seed);

std::string dos_csv(const DosCurve& curve, const ConfigEcho& echo);

enum class AcVerdict { stable, collapsing, inconclusive };

struct AcDetectorConfig {
    std::vector<double> eta_ladder{1e-1, 1e-2, 1e-3, 1e-4, 1e-5}; // strictly decreasing
    std::size_t pool_size = 4'000;
    int iterations = 1'000;
    // verdict thresholds, heuristic and configurable
    double stable_change = 0.10;
    double stable_floor = 1e-3;
    double collapse_band = 0.35;
    int workers = 1;
};

struct AcReport {
    AcVerdict verdict = AcVerdict::inconclusive;
    std::vector<double> etas;
    std::vector<double> medians; // median Im G^x per ladder rung
};

// Stability of Im G^x as eta decreases: "stable" when the median moves less
// than stable_change over the last two rungs and stays above stable_floor,
// "collapsing" when it decays like eta, "inconclusive" otherwise.
AcReport ac_detector(const TreeModel& model, double energy, const AcDetectorConfig& config,
                     std::uint64_t seed);

const char* to_string(AcVerdict v);

} // namespace bethe
