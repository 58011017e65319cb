#include "bethelab/moments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bethelab/parallel.hpp"

namespace bethe {

namespace {

constexpr std::uint64_t stream_tree = 0x54ull << 56;
constexpr std::uint64_t stream_abs = 0x41ull << 56;
constexpr std::uint64_t stream_cell = 0x53ull << 56;
constexpr double im_floor = 1e-300;

struct Accumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    double max_value = -std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
    std::uint64_t flagged = 0;
    std::uint64_t violations = 0;

    void add(double v)
    {
        sum += v;
        sumsq += v * v;
        if (v > max_value)
            max_value = v;
        ++count;
    }

    void merge(const Accumulator& other)
    {
        sum += other.sum;
        sumsq += other.sumsq;
        max_value = std::max(max_value, other.max_value);
        count += other.count;
        flagged += other.flagged;
        violations += other.violations;
    }
};

MomentEstimate finalize(const Accumulator& acc, const TreeModel& model,
                        const SpectralParameter& lambda, double p)
{
    if (acc.count < 2)
        throw std::runtime_error("moment estimate needs at least 2 valid samples");
    const auto total = acc.count + acc.flagged;
    if (static_cast<double>(acc.flagged) > 1e-6 * static_cast<double>(total))
        throw std::runtime_error("moment estimate aborted: flagged fraction " +
                                 std::to_string(static_cast<double>(acc.flagged) /
                                                static_cast<double>(total)) +
                                 " exceeds 1e-6");
    MomentEstimate est;
    const auto n = static_cast<double>(acc.count);
    est.mean = acc.sum / n;
    const double var = std::max(0.0, acc.sumsq / n - est.mean * est.mean);
    est.std_error = std::sqrt(var / (n - 1.0));
    est.max_observed = acc.max_value;
    est.samples = acc.count;
    est.flagged = acc.flagged;
    est.bound_violations = acc.violations;
    est.p = p;
    est.energy = lambda.energy();
    est.eta = lambda.eta();
    est.coupling = model.coupling;
    est.branching = model.branching;
    return est;
}

bool collapsed(Complex g)
{
    return !std::isfinite(g.real()) || !std::isfinite(g.imag()) || !(g.imag() > im_floor);
}

void validate_common(const SpectralParameter& lambda, double p)
{
    lambda.require_interior();
    if (!(p > 0.0) || !(p < 1.0))
        throw std::invalid_argument("moment estimator: p must lie in (0,1)");
}

// Full-tree sampler: one independent realization per sample index.
Accumulator run_full_tree(const TreeModel& model, const SpectralParameter& lambda, double p,
                          const SamplerConfig& sampler, std::uint64_t seed, Rooting rooting,
                          bool abs_moment)
{
    if (sampler.tree_samples < 2)
        throw std::invalid_argument("full_tree sampler needs tree_samples >= 2");
    const Complex z_fp = fixed_point(model.branching, lambda).value();
    const Complex lam = lambda.value();
    const double abs_fp = std::abs(z_fp);
    const double exponent = 1.0 + p;

    std::vector<Accumulator> partial(
        (sampler.tree_samples + 8191) / 8192);

    run_chunked(sampler.tree_samples, 8192, sampler.workers, [&](const ChunkRange& range) {
        TruncatedTree tree(model.branching, sampler.depth, rooting);
        Accumulator acc;
        for (std::size_t i = range.begin; i < range.end; ++i) {
            CounterRng rng(seed, stream_tree, i);
            tree.fill_potentials(model.potential, rng);
            const Complex g =
                green_value(tree, model.coupling, lam, sampler.policy, z_fp);
            if (collapsed(g)) {
                ++acc.flagged;
                continue;
            }
            if (abs_moment) {
                const double lhs = std::abs(g);
                const double rhs =
                    4.0 * z_fp.imag() * weight_value(g, z_fp) + 2.0 * abs_fp;
                if (lhs > rhs)
                    ++acc.violations;
                acc.add(std::pow(lhs, exponent));
            } else {
                acc.add(std::pow(weight_value(g, z_fp), exponent));
            }
        }
        partial[range.chunk_index] = acc;
    });

    Accumulator total;
    for (const auto& acc : partial)
        total.merge(acc);
    return total;
}

// Population sampler: statistics over the trailing window of sweeps.
Accumulator run_population(const TreeModel& model, const SpectralParameter& lambda, double p,
                           const SamplerConfig& sampler, std::uint64_t seed, bool abs_moment)
{
    if (sampler.sample_window < 1 || sampler.sample_window > sampler.iterations)
        throw std::invalid_argument("population sampler: sample_window must be in [1, iterations]");
    if (sampler.pool_size * static_cast<std::size_t>(sampler.sample_window) < 2)
        throw std::invalid_argument("population sampler: too few samples");

    const Complex z_fp = fixed_point(model.branching, lambda).value();
    const Complex lam = lambda.value();
    const double abs_fp = std::abs(z_fp);
    const double exponent = 1.0 + p;
    const int first_kept = sampler.iterations - sampler.sample_window;
    const std::size_t n = sampler.pool_size;
    const int m = model.branching;

    Accumulator acc;
    PopulationConfig pop{sampler.pool_size, sampler.iterations, sampler.workers};
    acc.flagged += population_dynamics_run(
        model, lambda, pop, seed, [&](int sweep, std::span<const Complex> pool) {
            if (sweep < first_kept)
                return;
            if (!abs_moment) {
                for (const Complex g : pool) {
                    const double w = weight_value(g, z_fp);
                    if (!std::isfinite(w)) {
                        ++acc.flagged;
                        continue;
                    }
                    acc.add(std::pow(w, exponent));
                }
                return;
            }
            // root values: M + 1 pool members and one fresh potential draw
            for (std::size_t i = 0; i < n; ++i) {
                CounterRng rng(seed, stream_abs | static_cast<std::uint64_t>(sweep), i);
                Complex sum = 0.0;
                for (int c = 0; c < m + 1; ++c)
                    sum += pool[rng.next_below(n)];
                const double q = model.potential.sample(rng);
                const Complex g = -1.0 / (sum + lam - model.coupling * q);
                if (collapsed(g)) {
                    ++acc.flagged;
                    continue;
                }
                const double lhs = std::abs(g);
                const double rhs = 4.0 * z_fp.imag() * weight_value(g, z_fp) + 2.0 * abs_fp;
                if (lhs > rhs)
                    ++acc.violations;
                acc.add(std::pow(lhs, exponent));
            }
        });
    return acc;
}

Accumulator run_sampler(const TreeModel& model, const SpectralParameter& lambda, double p,
                        const SamplerConfig& sampler, std::uint64_t seed, bool abs_moment)
{
    if (sampler.kind == SamplerKind::full_tree) {
        const Rooting rooting =
            abs_moment ? Rooting::full_lattice_root : Rooting::forward_subtree;
        return run_full_tree(model, lambda, p, sampler, seed, rooting, abs_moment);
    }
    return run_population(model, lambda, p, sampler, seed, abs_moment);
}

} // namespace

MomentEstimate estimate_weight_moment(const TreeModel& model, const SpectralParameter& lambda,
                                      double p, const SamplerConfig& sampler,
                                      std::uint64_t seed)
{
    validate_common(lambda, p);
    const Accumulator acc = run_sampler(model, lambda, p, sampler, seed, false);
    return finalize(acc, model, lambda, p);
}

MomentEstimate estimate_abs_moment(const TreeModel& model, const SpectralParameter& lambda,
                                   double p, const SamplerConfig& sampler,
                                   std::uint64_t seed)
{
    validate_common(lambda, p);
    const Accumulator acc = run_sampler(model, lambda, p, sampler, seed, true);
    return finalize(acc, model, lambda, p);
}

std::vector<SweepCell> sweep_weight_moment(const TreeModel& base, const SweepGrid& grid,
                                           const SamplerConfig& sampler, std::uint64_t seed)
{
    if (!(grid.p > 0.0) || !(grid.p < 1.0))
        throw std::invalid_argument("sweep: p must lie in (0,1)");
    for (const double eta : grid.etas)
        if (!(eta > 0.0))
            throw std::invalid_argument("sweep: all etas must be > 0");

    std::vector<SweepCell> cells;
    cells.reserve(grid.couplings.size() * grid.energies.size() * grid.etas.size());
    for (std::size_t ki = 0; ki < grid.couplings.size(); ++ki) {
        for (std::size_t ei = 0; ei < grid.energies.size(); ++ei) {
            const std::uint64_t cell_seed =
                CounterRng(seed, stream_cell | (static_cast<std::uint64_t>(ki) << 24) | ei, 0)
                    .next_u64();
            for (const double eta : grid.etas) {
                SweepCell cell;
                try {
                    const TreeModel model(base.branching, grid.couplings[ki], base.potential);
                    const SpectralParameter lambda(grid.energies[ei], eta);
                    cell.estimate =
                        estimate_weight_moment(model, lambda, grid.p, sampler, cell_seed);
                } catch (const std::exception& ex) {
                    cell.failed = true;
                    cell.error = ex.what();
                    cell.estimate.p = grid.p;
                    cell.estimate.energy = grid.energies[ei];
                    cell.estimate.eta = eta;
                    cell.estimate.coupling = grid.couplings[ki];
                    cell.estimate.branching = base.branching;
                    cell.estimate.mean = std::numeric_limits<double>::quiet_NaN();
                    cell.estimate.std_error = std::numeric_limits<double>::quiet_NaN();
                    cell.estimate.max_observed = std::numeric_limits<double>::quiet_NaN();
                }
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells, const ConfigEcho& echo)
{
    std::string out = echo.comment_block();
    out += "M,k,p,energy,eta,samples,mean,std_error,max_observed,flagged\n";
    for (const auto& cell : cells) {
        const auto& e = cell.estimate;
        out += std::to_string(e.branching);
        out += ',';
        out += format_double(e.coupling);
        out += ',';
        out += format_double(e.p);
        out += ',';
        out += format_double(e.energy);
        out += ',';
        out += format_double(e.eta);
        out += ',';
        out += std::to_string(e.samples);
        out += ',';
        out += format_double(e.mean);
        out += ',';
        out += format_double(e.std_error);
        out += ',';
        out += format_double(e.max_observed);
        out += ',';
        out += std::to_string(e.flagged);
        out += '\n';
    }
    return out;
}

} // namespace bethe
