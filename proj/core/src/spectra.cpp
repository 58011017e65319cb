#include "bethelab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bethelab/parallel.hpp"
#include "bethelab/recursion.hpp"

namespace bethe {

namespace {
constexpr std::uint64_t stream_dos = 0x44ull << 56;
}

double band_edge(int branching)
{
    if (branching < 2)
        throw std::invalid_argument("band_edge: branching number M must be >= 2");
    return 2.0 * std::sqrt(static_cast<double>(branching));
}

Complex free_root_green(int branching, const SpectralParameter& lambda)
{
    const Complex z_fp = fixed_point(branching, lambda).value();
    return -1.0 / (static_cast<double>(branching + 1) * z_fp + lambda.value());
}

DosCurve dos_free(int branching, std::span<const double> energies)
{
    const double edge = band_edge(branching);
    DosCurve curve;
    curve.branching = branching;
    curve.energies.assign(energies.begin(), energies.end());
    curve.density.reserve(energies.size());
    curve.std_error.assign(energies.size(), 0.0);
    for (const double e : energies) {
        if (std::abs(e) >= edge) {
            curve.density.push_back(0.0);
            continue;
        }
        const Complex g = free_root_green(branching, SpectralParameter(e, 0.0));
        curve.density.push_back(g.imag() / M_PI);
    }
    return curve;
}

DosCurve dos_disordered(const TreeModel& model, std::span<const double> energies, double eta,
                        const SamplerConfig& sampler, std::uint64_t seed)
{
    if (!(eta > 0.0))
        throw std::invalid_argument("dos_disordered: eta must be > 0");
    if (sampler.tree_samples < 2)
        throw std::invalid_argument("dos_disordered: needs tree_samples >= 2");

    DosCurve curve;
    curve.branching = model.branching;
    curve.coupling = model.coupling;
    curve.eta = eta;
    curve.samples = sampler.tree_samples;
    curve.energies.assign(energies.begin(), energies.end());
    curve.density.resize(energies.size(), 0.0);
    curve.std_error.resize(energies.size(), 0.0);

    for (std::size_t ei = 0; ei < curve.energies.size(); ++ei) {
        const SpectralParameter lambda(curve.energies[ei], eta);
        const Complex z_fp = fixed_point(model.branching, lambda).value();
        const Complex lam = lambda.value();
        const std::uint64_t cell_seed =
            CounterRng(seed, stream_dos | ei, 0).next_u64();

        const std::size_t n_chunks = (sampler.tree_samples + 8191) / 8192;
        std::vector<double> sums(n_chunks, 0.0), sumsqs(n_chunks, 0.0);
        run_chunked(sampler.tree_samples, 8192, sampler.workers, [&](const ChunkRange& range) {
            TruncatedTree tree(model.branching, sampler.depth, Rooting::full_lattice_root);
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t i = range.begin; i < range.end; ++i) {
                CounterRng rng(cell_seed, 0, i);
                tree.fill_potentials(model.potential, rng);
                const Complex g = green_value(tree, model.coupling, lam, sampler.policy, z_fp);
                const double v = g.imag() / M_PI;
                sum += v;
                sumsq += v * v;
            }
            sums[range.chunk_index] = sum;
            sumsqs[range.chunk_index] = sumsq;
        });

        double sum = 0.0, sumsq = 0.0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
            sum += sums[c];
            sumsq += sumsqs[c];
        }
        const auto n = static_cast<double>(sampler.tree_samples);
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean);
        curve.density[ei] = mean;
        curve.std_error[ei] = std::sqrt(var / (n - 1.0));
    }
    return curve;
}

std::string dos_csv(const DosCurve& curve, const ConfigEcho& echo)
{
    std::string out = echo.comment_block();
    out += "energy,density,std_error\n";
    for (std::size_t i = 0; i < curve.energies.size(); ++i) {
        out += format_double(curve.energies[i]);
        out += ',';
        out += format_double(curve.density[i]);
        out += ',';
        out += format_double(curve.std_error[i]);
        out += '\n';
    }
    return out;
}

AcReport ac_detector(const TreeModel& model, double energy, const AcDetectorConfig& config,
                     std::uint64_t seed)
{
    if (config.eta_ladder.size() < 2)
        throw std::invalid_argument("ac_detector: ladder needs at least two rungs");
    for (std::size_t i = 0; i + 1 < config.eta_ladder.size(); ++i)
        if (!(config.eta_ladder[i] > config.eta_ladder[i + 1]) ||
            !(config.eta_ladder[i + 1] > 0.0))
            throw std::invalid_argument("ac_detector: ladder must be strictly decreasing, > 0");

    AcReport report;
    report.etas = config.eta_ladder;
    report.medians.reserve(config.eta_ladder.size());

    // identical draws on every rung, so the ladder isolates the eta trend
    for (const double eta : config.eta_ladder) {
        const SpectralParameter lambda(energy, eta);
        PopulationConfig pop{config.pool_size, config.iterations, config.workers};
        std::vector<Complex> pool = population_dynamics(model, lambda, pop, seed);
        std::vector<double> ims(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i)
            ims[i] = pool[i].imag();
        auto mid = ims.begin() + static_cast<std::ptrdiff_t>(ims.size() / 2);
        std::nth_element(ims.begin(), mid, ims.end());
        report.medians.push_back(*mid);
    }

    const std::size_t last = report.medians.size() - 1;
    const double m_prev = report.medians[last - 1];
    const double m_last = report.medians[last];
    if (m_prev > 0.0 && m_last > config.stable_floor &&
        std::abs(m_last - m_prev) < config.stable_change * m_prev) {
        report.verdict = AcVerdict::stable;
        return report;
    }
    if (m_prev > 0.0 && m_last > 0.0) {
        const double ratio = std::log(m_prev / m_last);
        const double eta_ratio = std::log(report.etas[last - 1] / report.etas[last]);
        if (eta_ratio > 0.0 && std::abs(ratio / eta_ratio - 1.0) < config.collapse_band) {
            report.verdict = AcVerdict::collapsing;
            return report;
        }
    }
    report.verdict = AcVerdict::inconclusive;
    return report;
}

const char* to_string(AcVerdict v)
{
    switch (v) {
    case AcVerdict::stable: return "stable";
    case AcVerdict::collapsing: return "collapsing";
    case AcVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

} // namespace bethe
