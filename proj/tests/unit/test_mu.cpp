#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bethelab/mu.hpp"
#include "bethelab/rng.hpp"

using namespace bethe;

namespace {

double w_of(Complex z, Complex fp)
{
    return std::norm(z - fp) / (z.imag() * fp.imag());
}

std::vector<UpperHalfPoint> points(std::initializer_list<Complex> zs)
{
    std::vector<UpperHalfPoint> out;
    for (const Complex z : zs)
        out.emplace_back(z);
    return out;
}

// generic tuple away from the all-equal manifold (where the strict mu2 < 1
// gap falls below rounding); equal tuples are exercised separately
std::vector<UpperHalfPoint> generic_tuple(CounterRng& rng, int m, const SpectralParameter& lam)
{
    const Complex fp = fixed_point(m, lam).value();
    for (;;) {
        std::vector<UpperHalfPoint> zs;
        for (int i = 0; i < m; ++i)
            zs.emplace_back(rng.normal() * 2.0, std::pow(10.0, rng.uniform(-5.0, 1.0)));
        const double star = mu2_star(zs, lam);
        bool distinct = false;
        for (const auto& z : zs)
            distinct = distinct || std::abs(z.value() - fp) > 1e-6;
        if (distinct && star <= 1.0 - 1e-8)
            return zs;
    }
}

} // namespace

TEST_CASE("mu2 equals one on equal tuples over real lambda")
{
    CounterRng rng(21, 0, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(4));
        const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
        const SpectralParameter lam(rng.uniform(-edge, edge), 0.0);
        const UpperHalfPoint z(rng.normal() * 2.0, std::pow(10.0, rng.uniform(-4.0, 1.0)));
        const std::vector<UpperHalfPoint> zs(static_cast<std::size_t>(m), z);
        CHECK(std::abs(mu2(zs, 0.0, lam) - 1.0) <= 1e-10);
        CHECK(std::abs(mu2_rational(zs, 0.0, lam) - 1.0) <= 1e-10);
        CHECK(std::abs(mu2_star(zs, lam) - 1.0) <= 1e-12);
    }
}

TEST_CASE("mu2 is strictly below one for q = 0 inside the strip")
{
    const SpectralParameter lam(0.5, 0.01);
    CHECK(mu2(points({{0.0, 1.0}, {0.0, 2.0}}), 0.0, lam) < 1.0);

    CounterRng rng(22, 0, 0);
    for (int trial = 0; trial < 2000; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(3));
        const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
        const SpectralParameter inner(rng.uniform(-edge, edge),
                                      std::pow(10.0, rng.uniform(-6.0, -1.0)));
        const auto zs = generic_tuple(rng, m, inner);
        CHECK(mu2(zs, 0.0, inner) < 1.0);
    }
}

TEST_CASE("mu2 and its rational form agree to 1e-11 relative")
{
    { // spec anchor: points pinned at and near the fixed point
        const SpectralParameter lam(0.0, 1.0);
        const UpperHalfPoint fp = fixed_point(2, lam);
        const std::vector<UpperHalfPoint> zs{fp, UpperHalfPoint(fp.re(), fp.im() + 0.1)};
        const double a = mu2(zs, 0.0, lam);
        const double b = mu2_rational(zs, 0.0, lam);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(a, b));
    }
    { // near-boundary points stay finite in both forms
        const SpectralParameter lam(1.0, 1e-3);
        const auto zs = points({{0.4, 1e-8}, {-1.2, 1e-8}});
        const double a = mu2(zs, 0.3, lam);
        const double b = mu2_rational(zs, 0.3, lam);
        CHECK(std::isfinite(a));
        CHECK(std::abs(a - b) <= 1e-11 * std::max(a, b));
    }
    CounterRng rng(23, 0, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(4));
        const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
        const SpectralParameter lam(rng.uniform(-edge, edge),
                                    rng.uniform01() < 0.25
                                        ? 0.0
                                        : std::pow(10.0, rng.uniform(-8.0, 0.0)));
        std::vector<UpperHalfPoint> zs;
        for (int i = 0; i < m; ++i)
            zs.emplace_back(rng.normal() * 3.0, std::pow(10.0, rng.uniform(-8.0, 1.0)));
        const double q = rng.uniform(-2.0, 2.0);
        const double a = mu2(zs, q, lam);
        const double b = mu2_rational(zs, q, lam);
        CHECK(std::abs(a - b) <= 1e-11 * std::max({a, b, 1e-300}));
    }
}

TEST_CASE("mu2_star dominates mu2 at q = 0, with equality over real lambda")
{
    CounterRng rng(24, 0, 0);
    std::uint64_t violations = 0;
    double worst_eq = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(3));
        const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
        const double energy = rng.uniform(-edge, edge);
        std::vector<UpperHalfPoint> zs;
        for (int i = 0; i < m; ++i)
            zs.emplace_back(rng.normal() * 3.0, std::pow(10.0, rng.uniform(-6.0, 1.0)));

        const SpectralParameter interior(energy, std::pow(10.0, rng.uniform(-6.0, -1.0)));
        if (mu2(zs, 0.0, interior) > mu2_star(zs, interior) + 1e-12)
            ++violations;

        const SpectralParameter boundary(energy, 0.0);
        worst_eq = std::max(worst_eq,
                            std::abs(mu2(zs, 0.0, boundary) - mu2_star(zs, boundary)));
    }
    CHECK(violations == 0);
    CHECK(worst_eq <= 1e-12);
}

TEST_CASE("mu3p matches a straight-line evaluation")
{
    const SpectralParameter lam(0.3, 0.01);
    const Complex fp = fixed_point(2, lam).value();
    const Complex z1(0.0, 1.0), z2(0.0, 2.0), z3(1.0, 1.0);
    const double p = 0.5;

    // literal two-level composition, one cyclic shift at a time
    auto term = [&](Complex a, Complex b, Complex c) {
        const Complex inner = -1.0 / (a + b + lam.value() - 0.0);
        const Complex outer = -1.0 / (inner + c + lam.value() - 0.0);
        return std::pow(w_of(outer, fp), 1.5);
    };
    const double denominator =
        std::pow(w_of(z1, fp), 1.5) + std::pow(w_of(z2, fp), 1.5) + std::pow(w_of(z3, fp), 1.5);
    const double expected =
        (term(z1, z2, z3) + term(z2, z3, z1) + term(z3, z1, z2)) / denominator;

    const double got = mu3p(points({z1, z2, z3}), 0.0, 0.0, p, lam);
    CHECK(std::abs(got - expected) <= 1e-14 * expected);
}

TEST_CASE("mu3p is invariant under cyclic relabeling")
{
    CounterRng rng(25, 0, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(3));
        const std::size_t n = static_cast<std::size_t>(2 * m - 1);
        const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
        const SpectralParameter lam(rng.uniform(-edge, edge),
                                    std::pow(10.0, rng.uniform(-4.0, -1.0)));
        std::vector<UpperHalfPoint> zs;
        for (std::size_t i = 0; i < n; ++i)
            zs.emplace_back(rng.normal() * 2.0, std::pow(10.0, rng.uniform(-4.0, 1.0)));
        const double q1 = rng.uniform(-0.5, 0.5), q2 = rng.uniform(-0.5, 0.5);
        const double base = mu3p(zs, q1, q2, 0.5, lam);
        std::rotate(zs.begin(), zs.begin() + 1, zs.end());
        const double rotated = mu3p(zs, q1, q2, 0.5, lam);
        CHECK(std::abs(base - rotated) <= 1e-12 * std::max(base, 1.0));
    }
}

TEST_CASE("mu3p_prime matches a straight-line evaluation")
{
    const SpectralParameter lam(0.0, 1.0);
    const Complex fp = fixed_point(2, lam).value();
    const std::vector<UpperHalfPoint> zs =
        points({fp + Complex(0.0, 1.0), fp, fp});
    const double q = 0.2, p = 0.5;

    const Complex sum = zs[0].value() + zs[1].value() + zs[2].value();
    const Complex image = -1.0 / (sum + lam.value() - q);
    const double expected =
        std::pow(w_of(image, fp), 1.5) /
        (std::pow(w_of(zs[0].value(), fp), 1.5) + std::pow(w_of(zs[1].value(), fp), 1.5) +
         std::pow(w_of(zs[2].value(), fp), 1.5));
    const double got = mu3p_prime(zs, q, p, lam);
    CHECK(got > 0.0);
    CHECK(std::abs(got - expected) <= 1e-14 * expected);

    // stays finite against the 1 + |q|^{2(1+p)} envelope at |q| = 100
    const auto far = points({{3.0, 1e-6}, {-2.0, 1e-6}, {0.5, 1e-6}});
    const double big = mu3p_prime(far, 100.0, p, lam);
    CHECK(std::isfinite(big));
    CHECK(big >= 0.0);
}

TEST_CASE("mu functionals reject the all-fixed-point input and bad arity")
{
    const SpectralParameter lam(0.0, 1.0);
    const UpperHalfPoint fp = fixed_point(2, lam);
    const std::vector<UpperHalfPoint> at_fp(2, fp);
    CHECK_THROWS_AS(mu2(at_fp, 0.0, lam), std::domain_error);
    CHECK_THROWS_AS(mu2_star(at_fp, lam), std::domain_error);
    const std::vector<UpperHalfPoint> at_fp3(3, fp);
    CHECK_THROWS_AS(mu3p(at_fp3, 0.0, 0.0, 0.5, lam), std::domain_error);
    CHECK_THROWS_AS(mu3p_prime(at_fp3, 0.0, 0.5, lam), std::domain_error);

    const std::vector<UpperHalfPoint> one(1, fp);
    CHECK_THROWS_AS(mu2(one, 0.0, lam), std::invalid_argument);
    const std::vector<UpperHalfPoint> four(4, fp);
    CHECK_THROWS_AS(mu3p(four, 0.0, 0.0, 0.5, lam), std::invalid_argument); // even arity
    CHECK_THROWS_AS(mu3p(at_fp3, 0.0, 0.0, 1.5, lam), std::invalid_argument);
}

TEST_CASE("convexity chain on the nu simplex")
{
    // sum_sigma [(1/M^2) sum_first + (1/M) sum_rest]^{1+p} <= sum nu_i^{1+p}
    CounterRng rng(26, 0, 0);
    for (const int m : {2, 3}) {
        const std::size_t n = static_cast<std::size_t>(2 * m - 1);
        for (int trial = 0; trial < 10000; ++trial) {
            std::vector<double> nu(n);
            double total = 0.0;
            for (auto& v : nu) {
                v = -std::log(std::max(rng.uniform01(), 1e-300));
                total += v;
            }
            for (auto& v : nu)
                v /= total;
            double lhs = 0.0, den = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double first = 0.0, rest = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double v = nu[(r + i) % n];
                    if (i < static_cast<std::size_t>(m))
                        first += v;
                    else
                        rest += v;
                }
                lhs += std::pow(first / (m * m) + rest / m, 1.5);
            }
            for (const double v : nu)
                den += std::pow(v, 1.5);
            CHECK(lhs <= den + 1e-12);
        }
        // equality exactly at the barycenter
        std::vector<double> equal(n, 1.0 / static_cast<double>(n));
        double lhs = 0.0, den = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            lhs += std::pow((1.0 / (m * m)) * (m / static_cast<double>(n)) +
                                (1.0 / m) * ((m - 1) / static_cast<double>(n)),
                            1.5);
        for (const double v : equal)
            den += std::pow(v, 1.5);
        CHECK(std::abs(lhs - den) <= 1e-12);
    }
}

TEST_CASE("boundary case I: equal real points saturate mu2_star, unequal stay below")
{
    CounterRng rng(27, 0, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 2 + static_cast<int>(rng.next_below(3));
        const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
        const SpectralParameter lam(rng.uniform(-edge, edge), 0.0);
        const double x = rng.normal() * 2.0;
        const std::vector<UpperHalfPoint> equal(static_cast<std::size_t>(m),
                                                UpperHalfPoint(x, 1e-9));
        CHECK(std::abs(mu2_star(equal, lam) - 1.0) <= 1e-12);

        std::vector<UpperHalfPoint> unequal;
        for (int i = 0; i < m; ++i)
            unequal.emplace_back(x + 0.5 * (i + 1) * (1.0 + std::abs(rng.normal())), 1e-9);
        CHECK(mu2_star(unequal, lam) < 1.0);
    }
}

TEST_CASE("boundary case II: a points at i-infinity bound mu2_star by a/M")
{
    CounterRng rng(28, 0, 0);
    for (const int m : {2, 3}) {
        for (int a = 1; a < m; ++a) {
            const double edge = 2.0 * std::sqrt(double(m)) - 0.05;
            for (int trial = 0; trial < 500; ++trial) {
                const SpectralParameter lam(rng.uniform(-edge, edge), 0.0);
                const Complex fp = fixed_point(m, lam).value();
                const double y = 1e6;
                std::vector<UpperHalfPoint> zs;
                for (int i = 0; i < a; ++i)
                    zs.emplace_back(rng.normal(), y);
                for (int i = a; i < m; ++i) {
                    const double x = rng.normal() * 2.0;
                    // equal-chi rates couple the two charts
                    zs.emplace_back(x, std::norm(Complex(x, 0.0) - fp) / y);
                }
                CHECK(mu2_star(zs, lam) <= static_cast<double>(a) / m + 0.01);
            }
        }
    }
}

TEST_CASE("certify lemma 2.1: smoke certificate is positive and deterministic")
{
    CertifySearchConfig cfg;
    cfg.samples = 20000;
    const MuReport r = certify_lemma21(2, 0.5, 2.0, cfg, 99);
    CHECK(r.lemma == "L2.1");
    CHECK(r.samples == 20000);
    CHECK(r.violations == 0);
    CHECK(r.max_value < 1.0);
    CHECK(r.certificate_epsilon > 0.0);
    CHECK(r.argmax_points.size() == 3);

    cfg.workers = 3;
    const MuReport r3 = certify_lemma21(2, 0.5, 2.0, cfg, 99);
    CHECK(r3.max_value == r.max_value);
    CHECK(mu_report_json(r3) == mu_report_json(r));
    CHECK(mu_report_json(r).find("sampled bound") != std::string::npos);
    CHECK(mu_report_json(r).find("certificate_epsilon") != std::string::npos);
}

TEST_CASE("certify lemma 2.2: smoke constants are finite")
{
    CertifySearchConfig cfg;
    cfg.samples = 20000;
    const MuReport r = certify_lemma22(2, 0.5, 2.0, cfg, 7);
    CHECK(r.lemma == "L2.2");
    CHECK(std::isfinite(r.max_value));
    CHECK(r.max_value > 0.0);
    CHECK(std::isfinite(r.fitted_c_prime));
    CHECK(r.fitted_c_prime > 0.0);
    CHECK(mu_report_json(r).find("fitted_C") != std::string::npos);
    CHECK(mu_report_json(r).find("fitted_C_prime") != std::string::npos);

    // q = 0 specialization is consistent with the lemma 2.1 search scale
    CertifySearchConfig narrow = cfg;
    narrow.q_max = 1e-9;
    const MuReport r0 = certify_lemma22(2, 0.5, 2.0, narrow, 7);
    CHECK(r0.max_value <= 1.05);
}

TEST_CASE("certify: input validation")
{
    CertifySearchConfig cfg;
    CHECK_THROWS_AS(certify_lemma21(2, 1.5, 2.0, cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(certify_lemma21(2, 0.5, 5.0, cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(certify_lemma21( 1, 0.5, 1.0, cfg, 1), std::invalid_argument);
    cfg.rho = -1.0;
    CHECK_THROWS_AS(certify_lemma21(2, 0.5, 2.0, cfg, 1), std::invalid_argument);
}

TEST_CASE("mu scan: contraction and dual-formula checks hold over the sampled region")
{
    CertifySearchConfig cfg;
    cfg.rho = 0.0;
    cfg.samples = 20000;
    const MuScanReport r = mu_scan(2, 0.5, 2.0, cfg, 12);
    CHECK(r.domination_violations == 0);
    CHECK(r.mu2_ge_one == 0);
    CHECK(r.max_dual_rel_dev <= 1e-11);
    CHECK(r.max_mu2_star <= 1.0 + 1e-12);
    CHECK(r.max_mu3p > 0.0);
    CHECK(mu_scan_json(r).find("sampled extrema") != std::string::npos);
}
