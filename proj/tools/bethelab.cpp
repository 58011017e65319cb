// bethelab: batch front-end for the Cayley-tree Anderson model laboratory.
// Subcommands: verify, oracle, sweep, mu-scan, dos, certify.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bethelab/halfplane.hpp"
#include "bethelab/io.hpp"
#include "bethelab/model.hpp"
#include "bethelab/moments.hpp"
#include "bethelab/mu.hpp"
#include "bethelab/oracle.hpp"
#include "bethelab/recursion.hpp"
#include "bethelab/spectra.hpp"

namespace {

using namespace bethe;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_gated_failure = 2;

struct CommonOpts {
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out;
    std::string out_dir;
    std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_out)
{
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--workers", opts.workers, "worker threads (results are worker-count independent)");
    opts.out = default_out;
    cmd->add_option("--out", opts.out, "output artifact file name");
    cmd->add_option("--out-dir", opts.out_dir, "output directory")->envname("BETHELAB_OUT");
    cmd->add_option("--config", opts.config_path, "flat key=value config file; command-line flags win");
}

std::string resolve_out_path(const CommonOpts& opts)
{
    if (opts.out_dir.empty() || opts.out.front() == '/')
        return opts.out;
    return opts.out_dir + "/" + opts.out;
}

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (values.empty())
        throw CLI::ValidationError(std::string(what) + ": empty list");
    return values;
}

std::vector<double> linspace(double lo, double hi, int count)
{
    if (count < 1)
        throw CLI::ValidationError("grid: count must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

std::string join_doubles(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ',';
        out += format_double(values[i]);
    }
    return out;
}

// --- config file ------------------------------------------------------------

// Flat "key = value" file mapped onto the active subcommand's long options.
// Entries are injected before the user's own flags, so explicit flags win.
std::vector<std::string> config_args(const std::string& path, const CLI::App* cmd)
{
    std::ifstream is(path);
    if (!is)
        throw CLI::ValidationError("config: cannot open '" + path + "'");
    std::vector<std::string> args;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError(path + ":" + std::to_string(line_no) +
                                       ": expected 'key = value'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw CLI::ValidationError(path + ":" + std::to_string(line_no) + ": empty key");
        const std::string opt_name = "--" + key;
        bool known = false;
        for (const auto* opt : cmd->get_options())
            if (opt->check_name(opt_name)) {
                known = true;
                break;
            }
        if (!known)
            throw CLI::ValidationError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                       key + "' for subcommand '" + cmd->get_name() + "'");
        args.push_back(opt_name + "=" + value);
    }
    return args;
}

// --- verify -----------------------------------------------------------------

struct CheckPrinter {
    bool all_ok = true;

    void report(const std::string& name, bool ok, const std::string& detail)
    {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name;
        if (!detail.empty())
            std::cout << " (" << detail << ")";
        std::cout << "\n";
        all_ok = all_ok && ok;
    }
};

int run_verify(const CommonOpts& opts)
{
    CheckPrinter out;
    const std::uint64_t seed = opts.seed;

    { // fixed-point identity phi(z_fp,...,z_fp, 0, lambda) = z_fp
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            CounterRng rng(seed, 100, static_cast<std::uint64_t>(i));
            const int m = 2 + static_cast<int>(rng.next_below(5));
            const double edge = band_edge(m);
            const SpectralParameter lam(rng.uniform(-edge + 0.01, edge - 0.01),
                                        rng.uniform01() < 0.3 ? 0.0 : std::pow(10.0, rng.uniform(-9.0, 0.0)));
            const UpperHalfPoint z_fp = fixed_point(m, lam);
            const std::vector<UpperHalfPoint> zs(static_cast<std::size_t>(m), z_fp);
            const UpperHalfPoint image = mobius_phi(zs, 0.0, lam);
            worst = std::max(worst, std::abs(image.value() - z_fp.value()));
        }
        out.report("fixed-point identity", worst <= 1e-12,
                   "max |phi(z_fp..) - z_fp| = " + format_double(worst));
    }

    { // circle law |z_fp| = 1/sqrt(M) on the real band
        double worst = 0.0;
        for (int m = 2; m <= 6; ++m) {
            const double edge = band_edge(m) - 0.01;
            for (int i = 0; i < 200; ++i) {
                const double e = -edge + 2.0 * edge * i / 199.0;
                const UpperHalfPoint z_fp = fixed_point(m, SpectralParameter(e, 0.0));
                worst = std::max(worst,
                                 std::abs(std::abs(z_fp.value()) - 1.0 / std::sqrt(double(m))));
            }
        }
        out.report("circle law", worst <= 1e-12, "max deviation = " + format_double(worst));
    }

    { // half-plane preservation and weight/chi reciprocity
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 10000 && ok; ++i) {
            CounterRng rng(seed, 101, static_cast<std::uint64_t>(i));
            const int m = 2 + static_cast<int>(rng.next_below(3));
            const SpectralParameter lam(rng.uniform(-2.0, 2.0),
                                        std::pow(10.0, rng.uniform(-6.0, 0.0)));
            std::vector<UpperHalfPoint> zs;
            for (int j = 0; j < m; ++j)
                zs.emplace_back(rng.normal() * 2.0, std::pow(10.0, rng.uniform(-6.0, 1.0)));
            const UpperHalfPoint image = mobius_phi(zs, rng.uniform(-1.0, 1.0), lam);
            ok = ok && image.im() > 0.0;
            const double w = weight(zs[0], m, lam);
            if (w > 0.0)
                worst = std::max(worst, std::abs(chi(zs[0], m, lam) * w - 1.0));
        }
        out.report("half-plane preservation + weight*chi = 1", ok && worst <= 1e-14,
                   "max |w*chi - 1| = " + format_double(worst));
    }

    { // contraction for eta > 0, isometry for eta = 0
        bool ok = true;
        double worst_iso = 0.0;
        for (int i = 0; i < 1000 && ok; ++i) {
            CounterRng rng(seed, 102, static_cast<std::uint64_t>(i));
            const UpperHalfPoint a(rng.normal() * 2.0, std::pow(10.0, rng.uniform(-3.0, 1.0)));
            const UpperHalfPoint b(rng.normal() * 2.0, std::pow(10.0, rng.uniform(-3.0, 1.0)));
            if (std::abs(a.value() - b.value()) < 1e-6)
                continue;
            const SpectralParameter interior(rng.uniform(-2.0, 2.0),
                                             std::pow(10.0, rng.uniform(-4.0, 0.0)));
            ok = ok && hyperbolic_dist(contraction_map(a, interior), contraction_map(b, interior)) <
                           hyperbolic_dist(a, b);
            const SpectralParameter boundary(rng.uniform(-2.0, 2.0), 0.0);
            worst_iso = std::max(
                worst_iso,
                std::abs(hyperbolic_dist(contraction_map(a, boundary), contraction_map(b, boundary)) -
                         hyperbolic_dist(a, b)));
        }
        out.report("hyperbolic contraction / boundary isometry", ok && worst_iso <= 1e-10,
                   "max isometry defect = " + format_double(worst_iso));
    }

    { // |z| <= 4 Im(s) c(s,z) + 2|s|
        std::uint64_t bad = 0;
        for (int i = 0; i < 100000; ++i) {
            CounterRng rng(seed, 103, static_cast<std::uint64_t>(i));
            const UpperHalfPoint z(rng.normal() * 5.0, std::pow(10.0, rng.uniform(-6.0, 2.0)));
            const UpperHalfPoint s(rng.normal() * 5.0, std::pow(10.0, rng.uniform(-6.0, 2.0)));
            const auto [lhs, rhs] = abs_from_weight_bound(z, s);
            if (lhs > rhs)
                ++bad;
        }
        out.report("absolute-value bound", bad == 0, std::to_string(bad) + " violations in 1e5");
    }

    { // recursion vs sparse resolvent, small smoke
        double worst = 0.0;
        const PotentialDistribution nu = PotentialDistribution::uniform_symmetric(1.0);
        const SpectralParameter lam(0.5, 0.01);
        bool herglotz = true;
        for (int m = 2; m <= 3; ++m) {
            for (int depth = 1; depth <= 5; ++depth) {
                for (int trial = 0; trial < 5; ++trial) {
                    CounterRng rng(seed, 104, static_cast<std::uint64_t>(m * 1000 + depth * 10 + trial));
                    TruncatedTree tree(m, depth, Rooting::forward_subtree);
                    tree.fill_potentials(nu, rng);
                    const Complex rec =
                        forward_green(tree, 0.3, lam, LeafPolicy::truncate).value();
                    const Complex orc = resolvent_oracle(tree, 0.3, lam);
                    worst = std::max(worst, std::abs(rec - orc) / std::abs(orc));
                    herglotz = herglotz && rec.imag() > 0.0 && orc.imag() > 0.0;
                }
            }
        }
        out.report("recursion = sparse resolvent (smoke)", worst <= 1e-10 && herglotz,
                   "max rel err = " + format_double(worst));
    }

    return out.all_ok ? exit_ok : exit_gated_failure;
}

// --- oracle -----------------------------------------------------------------

int run_oracle(const CommonOpts& opts, int branching, int max_depth, int trials,
               double coupling, const std::string& nu_label, double energy, double eta,
               double tol)
{
    const PotentialDistribution nu = PotentialDistribution::parse(nu_label);
    const SpectralParameter lam(energy, eta);

    ConfigEcho echo;
    echo.add("command", std::string("oracle"));
    echo.add("branching", static_cast<std::int64_t>(branching));
    echo.add("max_depth", static_cast<std::int64_t>(max_depth));
    echo.add("trials", static_cast<std::int64_t>(trials));
    echo.add("coupling", coupling);
    echo.add("nu", nu.label());
    echo.add("energy", energy);
    echo.add("eta", eta);
    echo.add("tol", tol);
    echo.add("seed", opts.seed);

    std::string csv = echo.comment_block();
    csv += "M,depth,trial,rel_err_forward,rel_err_root\n";
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        const int depth = 1 + trial % max_depth;

        CounterRng rng(opts.seed, 7, static_cast<std::uint64_t>(trial));
        TruncatedTree fwd(branching, depth, Rooting::forward_subtree);
        fwd.fill_potentials(nu, rng);
        const Complex rec_f = forward_green(fwd, coupling, lam, LeafPolicy::truncate).value();
        const Complex orc_f = resolvent_oracle(fwd, coupling, lam);
        const double err_f = std::abs(rec_f - orc_f) / std::abs(orc_f);

        TruncatedTree root(branching, depth, Rooting::full_lattice_root);
        root.fill_potentials(nu, rng);
        const Complex rec_r = root_green(root, coupling, lam, LeafPolicy::truncate).value();
        const Complex orc_r = resolvent_oracle(root, coupling, lam);
        const double err_r = std::abs(rec_r - orc_r) / std::abs(orc_r);

        worst = std::max({worst, err_f, err_r});
        csv += std::to_string(branching) + ',' + std::to_string(depth) + ',' +
               std::to_string(trial) + ',' + format_double(err_f) + ',' + format_double(err_r) +
               '\n';
    }
    write_text_file(resolve_out_path(opts), csv);
    std::cout << "oracle: " << trials << " trials, max relative error " << format_double(worst)
              << " -> " << resolve_out_path(opts) << "\n";
    return worst <= tol ? exit_ok : exit_gated_failure;
}

// --- sweep ------------------------------------------------------------------

int run_sweep(const CommonOpts& opts, int branching, const std::string& nu_label,
              const std::vector<double>& couplings, const std::vector<double>& energies,
              const std::vector<double>& etas, double p, SamplerConfig sampler)
{
    const TreeModel base(branching, couplings.front(), PotentialDistribution::parse(nu_label));
    SweepGrid grid;
    grid.energies = energies;
    grid.etas = etas;
    grid.couplings = couplings;
    grid.p = p;
    sampler.workers = opts.workers;

    ConfigEcho echo;
    echo.add("command", std::string("sweep"));
    echo.add("branching", static_cast<std::int64_t>(branching));
    echo.add("nu", base.potential.label());
    echo.add("couplings", join_doubles(couplings));
    echo.add("energies", join_doubles(energies));
    echo.add("etas", join_doubles(etas));
    echo.add("p", p);
    echo.add("sampler", std::string(sampler.kind == SamplerKind::population ? "population" : "full-tree"));
    echo.add("pool", static_cast<std::uint64_t>(sampler.pool_size));
    echo.add("iterations", static_cast<std::int64_t>(sampler.iterations));
    echo.add("window", static_cast<std::int64_t>(sampler.sample_window));
    echo.add("depth", static_cast<std::int64_t>(sampler.depth));
    echo.add("tree_samples", sampler.tree_samples);
    echo.add("seed", opts.seed);

    const auto cells = sweep_weight_moment(base, grid, sampler, opts.seed);
    for (const auto& cell : cells)
        if (cell.failed)
            std::cerr << "sweep: cell (k=" << format_double(cell.estimate.coupling)
                      << ", E=" << format_double(cell.estimate.energy)
                      << ", eta=" << format_double(cell.estimate.eta) << ") failed: " << cell.error
                      << "\n";
    write_text_file(resolve_out_path(opts), sweep_csv(cells, echo));
    std::cout << "sweep: " << cells.size() << " cells -> " << resolve_out_path(opts) << "\n";
    return exit_ok;
}

// --- mu-scan ----------------------------------------------------------------

int run_mu_scan(const CommonOpts& opts, int branching, double p, double energy_bound,
                CertifySearchConfig cfg)
{
    cfg.workers = opts.workers;
    const MuScanReport report = mu_scan(branching, p, energy_bound, cfg, opts.seed);
    write_text_file(resolve_out_path(opts), mu_scan_json(report));
    std::cout << "mu-scan: max mu2 = " << format_double(report.max_mu2)
              << ", max mu2* = " << format_double(report.max_mu2_star)
              << ", max mu3p = " << format_double(report.max_mu3p) << " -> "
              << resolve_out_path(opts) << "\n";
    const bool ok = report.domination_violations == 0 && report.mu2_ge_one == 0 &&
                    report.max_dual_rel_dev <= 1e-11;
    return ok ? exit_ok : exit_gated_failure;
}

// --- dos --------------------------------------------------------------------

int run_dos(const CommonOpts& opts, int branching, bool free_lattice, double coupling,
            const std::string& nu_label, std::vector<double> energies, double eta,
            SamplerConfig sampler, const std::string& svg_path)
{
    ConfigEcho echo;
    echo.add("command", std::string("dos"));
    echo.add("branching", static_cast<std::int64_t>(branching));
    echo.add("free", std::string(free_lattice ? "true" : "false"));

    DosCurve curve;
    if (free_lattice) {
        curve = dos_free(branching, energies);
    } else {
        const TreeModel model(branching, coupling, PotentialDistribution::parse(nu_label));
        sampler.workers = opts.workers;
        echo.add("coupling", coupling);
        echo.add("nu", model.potential.label());
        echo.add("eta", eta);
        echo.add("depth", static_cast<std::int64_t>(sampler.depth));
        echo.add("tree_samples", sampler.tree_samples);
        curve = dos_disordered(model, energies, eta, sampler, opts.seed);
    }
    echo.add("energies", join_doubles(energies));
    echo.add("seed", opts.seed);

    write_text_file(resolve_out_path(opts), dos_csv(curve, echo));
    if (!svg_path.empty()) {
        SvgSeries series;
        series.label = free_lattice ? "free density of states" : "disordered density of states";
        for (std::size_t i = 0; i < curve.energies.size(); ++i)
            series.points.emplace_back(curve.energies[i], curve.density[i]);
        write_text_file(svg_path, svg_line_chart({series}, "energy", "density"));
    }
    std::cout << "dos: " << curve.energies.size() << " points -> " << resolve_out_path(opts)
              << "\n";
    return exit_ok;
}

// --- certify ----------------------------------------------------------------

int run_certify(const CommonOpts& opts, int lemma, int branching, double p, double energy_bound,
                CertifySearchConfig cfg)
{
    cfg.workers = opts.workers;
    MuReport report;
    if (lemma == 21)
        report = certify_lemma21(branching, p, energy_bound, cfg, opts.seed);
    else if (lemma == 22)
        report = certify_lemma22(branching, p, energy_bound, cfg, opts.seed);
    else
        throw CLI::ValidationError("certify: --lemma must be 21 or 22");

    write_text_file(resolve_out_path(opts), mu_report_json(report));
    if (lemma == 21) {
        std::cout << "certify L2.1: max mu3p = " << format_double(report.max_value)
                  << ", epsilon = " << format_double(report.certificate_epsilon)
                  << " (sampled bound) -> " << resolve_out_path(opts) << "\n";
        return report.max_value < 1.0 ? exit_ok : exit_gated_failure;
    }
    std::cout << "certify L2.2: fitted C = " << format_double(report.max_value)
              << ", C' = " << format_double(report.fitted_c_prime) << " (sampled bound) -> "
              << resolve_out_path(opts) << "\n";
    return std::isfinite(report.max_value) && std::isfinite(report.fitted_c_prime)
               ? exit_ok
               : exit_gated_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical laboratory for the Anderson model on Cayley trees"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // verify
    CommonOpts verify_opts;
    auto* cmd_verify = app.add_subcommand("verify", "run the half-plane and recursion invariant suite");
    add_common(cmd_verify, verify_opts, "");

    // oracle
    CommonOpts oracle_opts;
    int oracle_m = 2, oracle_depth = 8, oracle_trials = 100;
    double oracle_k = 0.3, oracle_e = 0.5, oracle_eta = 0.01, oracle_tol = 1e-10;
    std::string oracle_nu = "uniform:1";
    auto* cmd_oracle =
        app.add_subcommand("oracle", "compare the recursion against the sparse resolvent");
    add_common(cmd_oracle, oracle_opts, "oracle.csv");
    cmd_oracle->add_option("--branching", oracle_m, "branching number M");
    cmd_oracle->add_option("--depth", oracle_depth, "maximum tree depth");
    cmd_oracle->add_option("--trials", oracle_trials, "number of random realizations");
    cmd_oracle->add_option("--coupling", oracle_k, "disorder strength k");
    cmd_oracle->add_option("--nu", oracle_nu, "potential distribution");
    cmd_oracle->add_option("--energy", oracle_e, "Re lambda");
    cmd_oracle->add_option("--eta", oracle_eta, "Im lambda");
    cmd_oracle->add_option("--tol", oracle_tol, "gate on the max relative error");

    // sweep
    CommonOpts sweep_opts;
    int sweep_m = 2;
    std::string sweep_nu = "uniform:1", sweep_couplings = "0.1", sweep_energies, sweep_etas = "0.1,0.01,0.001,0.0001";
    double sweep_emin = -2.0, sweep_emax = 2.0, sweep_p = 0.5;
    int sweep_ecount = 5;
    std::string sweep_sampler = "population";
    SamplerConfig sweep_cfg;
    auto* cmd_sweep = app.add_subcommand("sweep", "weight-moment sweep over (E, eta, k)");
    add_common(cmd_sweep, sweep_opts, "sweep.csv");
    cmd_sweep->add_option("--branching", sweep_m, "branching number M");
    cmd_sweep->add_option("--nu", sweep_nu, "potential distribution");
    cmd_sweep->add_option("--couplings", sweep_couplings, "comma list of k values");
    cmd_sweep->add_option("--energies", sweep_energies, "comma list of energies (overrides --emin/--emax/--ecount)");
    cmd_sweep->add_option("--emin", sweep_emin, "energy grid start");
    cmd_sweep->add_option("--emax", sweep_emax, "energy grid end");
    cmd_sweep->add_option("--ecount", sweep_ecount, "energy grid size");
    cmd_sweep->add_option("--etas", sweep_etas, "comma list of eta rungs (all > 0)");
    cmd_sweep->add_option("--p", sweep_p, "moment exponent parameter, in (0,1)");
    cmd_sweep->add_option("--sampler", sweep_sampler, "population | full-tree")
        ->check(CLI::IsMember({"population", "full-tree"}));
    cmd_sweep->add_option("--pool", sweep_cfg.pool_size, "population pool size");
    cmd_sweep->add_option("--iterations", sweep_cfg.iterations, "population sweeps");
    cmd_sweep->add_option("--window", sweep_cfg.sample_window, "trailing sweeps used for statistics");
    cmd_sweep->add_option("--depth", sweep_cfg.depth, "full-tree depth");
    cmd_sweep->add_option("--tree-samples", sweep_cfg.tree_samples, "full-tree realizations per cell");

    // mu-scan
    CommonOpts mu_opts;
    int mu_m = 2;
    double mu_p = 0.5, mu_e = 2.0;
    CertifySearchConfig mu_cfg;
    mu_cfg.rho = 0.0; // scan the whole domain by default
    mu_cfg.samples = 100'000;
    auto* cmd_mu = app.add_subcommand("mu-scan", "sampled extrema of mu2 / mu2* / mu3p");
    add_common(cmd_mu, mu_opts, "mu_scan.json");
    cmd_mu->add_option("--branching", mu_m, "branching number M");
    cmd_mu->add_option("--p", mu_p, "moment exponent parameter, in (0,1)");
    cmd_mu->add_option("--energy-bound", mu_e, "E of the strip R(E, eps0)");
    cmd_mu->add_option("--rho", mu_cfg.rho, "compact-core size; samples keep sum w > rho");
    cmd_mu->add_option("--eta1", mu_cfg.eta1, "|q| bound");
    cmd_mu->add_option("--eps0", mu_cfg.eps0, "Im lambda upper bound");
    cmd_mu->add_option("--samples", mu_cfg.samples, "sample count");

    // dos
    CommonOpts dos_opts;
    int dos_m = 2;
    bool dos_free_flag = false;
    double dos_k = 0.1, dos_eta = 1e-4, dos_emin = 0.0, dos_emax = 0.0;
    int dos_ecount = 201;
    std::string dos_nu = "uniform:1", dos_svg;
    SamplerConfig dos_cfg;
    dos_cfg.tree_samples = 2'000;
    dos_cfg.depth = 10;
    auto* cmd_dos = app.add_subcommand("dos", "density of states (closed form or Monte Carlo)");
    add_common(cmd_dos, dos_opts, "dos.csv");
    cmd_dos->add_option("--branching", dos_m, "branching number M");
    cmd_dos->add_flag("--free", dos_free_flag, "closed-form free lattice curve");
    cmd_dos->add_option("--coupling", dos_k, "disorder strength k");
    cmd_dos->add_option("--nu", dos_nu, "potential distribution");
    cmd_dos->add_option("--eta", dos_eta, "Im lambda for the Monte Carlo curve");
    cmd_dos->add_option("--emin", dos_emin, "energy grid start (default: -band edge)");
    cmd_dos->add_option("--emax", dos_emax, "energy grid end (default: band edge)");
    cmd_dos->add_option("--ecount", dos_ecount, "energy grid size");
    cmd_dos->add_option("--depth", dos_cfg.depth, "tree depth for the Monte Carlo curve");
    cmd_dos->add_option("--tree-samples", dos_cfg.tree_samples, "realizations per energy");
    cmd_dos->add_option("--svg", dos_svg, "also render the curve to this SVG file");

    // certify
    CommonOpts cert_opts;
    int cert_lemma = 21, cert_m = 2;
    double cert_p = 0.5, cert_e = 2.0;
    CertifySearchConfig cert_cfg;
    auto* cmd_cert = app.add_subcommand("certify", "sampled certificates for the mu3p lemmas");
    add_common(cmd_cert, cert_opts, "certificate.json");
    cmd_cert->add_option("--lemma", cert_lemma, "21 or 22");
    cmd_cert->add_option("--branching", cert_m, "branching number M");
    cmd_cert->add_option("--p", cert_p, "moment exponent parameter, in (0,1)");
    cmd_cert->add_option("--energy-bound", cert_e, "E of the strip R(E, eps0)");
    cmd_cert->add_option("--rho", cert_cfg.rho, "compact-core size");
    cmd_cert->add_option("--eta1", cert_cfg.eta1, "|q| bound (lemma 21)");
    cmd_cert->add_option("--eps0", cert_cfg.eps0, "Im lambda upper bound");
    cmd_cert->add_option("--qmax", cert_cfg.q_max, "|q| bound (lemma 22)");
    cmd_cert->add_option("--samples", cert_cfg.samples, "sample count");

    // Inject config-file entries (if any) before the user's flags.
    std::vector<std::string> raw_args(argv + 1, argv + argc);
    try {
        std::string sub_name;
        for (const auto& a : raw_args)
            if (!a.empty() && a[0] != '-') {
                sub_name = a;
                break;
            }
        std::string config_path;
        for (std::size_t i = 0; i < raw_args.size(); ++i) {
            if (raw_args[i] == "--config" && i + 1 < raw_args.size())
                config_path = raw_args[i + 1];
            else if (raw_args[i].rfind("--config=", 0) == 0)
                config_path = raw_args[i].substr(9);
        }
        if (!config_path.empty() && !sub_name.empty()) {
            const CLI::App* sub = app.get_subcommand_no_throw(sub_name);
            if (sub != nullptr) {
                const auto injected = config_args(config_path, sub);
                auto at = std::find(raw_args.begin(), raw_args.end(), sub_name);
                raw_args.insert(at + 1, injected.begin(), injected.end());
            }
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }

    try {
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : raw_args)
            cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (cmd_verify->parsed())
            return run_verify(verify_opts);
        if (cmd_oracle->parsed()) {
            oracle_opts.workers = oracle_opts.workers; // workers unused: trials run serially
            return run_oracle(oracle_opts, oracle_m, oracle_depth, oracle_trials, oracle_k,
                              oracle_nu, oracle_e, oracle_eta, oracle_tol);
        }
        if (cmd_sweep->parsed()) {
            sweep_cfg.kind = sweep_sampler == "population" ? SamplerKind::population
                                                           : SamplerKind::full_tree;
            const auto energies = sweep_energies.empty()
                                      ? linspace(sweep_emin, sweep_emax, sweep_ecount)
                                      : parse_list(sweep_energies, "--energies");
            return run_sweep(sweep_opts, sweep_m, sweep_nu,
                             parse_list(sweep_couplings, "--couplings"), energies,
                             parse_list(sweep_etas, "--etas"), sweep_p, sweep_cfg);
        }
        if (cmd_mu->parsed())
            return run_mu_scan(mu_opts, mu_m, mu_p, mu_e, mu_cfg);
        if (cmd_dos->parsed()) {
            double lo = dos_emin, hi = dos_emax;
            if (lo == 0.0 && hi == 0.0) {
                hi = band_edge(dos_m);
                lo = -hi;
            }
            return run_dos(dos_opts, dos_m, dos_free_flag, dos_k, dos_nu,
                           linspace(lo, hi, dos_ecount), dos_eta, dos_cfg, dos_svg);
        }
        if (cmd_cert->parsed())
            return run_certify(cert_opts, cert_lemma, cert_m, cert_p, cert_e, cert_cfg);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
