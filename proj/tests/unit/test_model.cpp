#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "bethelab/model.hpp"

using namespace bethe;

namespace {

// Simpson quadrature of |q|^s against the density of nu on [-cut, cut].
double moment_by_quadrature(const PotentialDistribution& nu, double p, double cut, int n)
{
    const double s = 2.0 * (1.0 + p);
    auto density = [&](double q) {
        switch (nu.kind()) {
        case PotentialKind::uniform_symmetric:
            return std::abs(q) <= nu.parameter() ? 0.5 / nu.parameter() : 0.0;
        case PotentialKind::gaussian: {
            const double sig = nu.parameter();
            return std::exp(-0.5 * q * q / (sig * sig)) / (sig * std::sqrt(2.0 * M_PI));
        }
        default:
            return 0.0;
        }
    };
    // integrand is even: integrate [0, cut] with exact endpoints and double
    const double h = cut / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double q = cut * i / n;
        const double f = std::pow(q, s) * density(q);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * f;
    }
    return 2.0 * acc * h / 3.0;
}

} // namespace

TEST_CASE("potential parsing round-trips the supported kinds")
{
    CHECK(PotentialDistribution::parse("zero").kind() == PotentialKind::constant_zero);
    CHECK(PotentialDistribution::parse("pm1").kind() == PotentialKind::bernoulli_pm1);
    const auto u = PotentialDistribution::parse("uniform:2.5");
    CHECK(u.kind() == PotentialKind::uniform_symmetric);
    CHECK(u.parameter() == 2.5);
    const auto g = PotentialDistribution::parse("gauss:0.5");
    CHECK(g.kind() == PotentialKind::gaussian);
    CHECK(g.parameter() == 0.5);
    CHECK_THROWS_AS(PotentialDistribution::parse("cauchy"), std::invalid_argument);
    CHECK_THROWS_AS(PotentialDistribution::parse("uniform:x"), std::invalid_argument);
    CHECK_THROWS_AS(PotentialDistribution::uniform_symmetric(-1.0), std::invalid_argument);
}

TEST_CASE("tree model validation")
{
    CHECK_THROWS_AS(TreeModel(1, 0.0, PotentialDistribution::constant_zero()),
                    std::invalid_argument);
    CHECK_THROWS_AS(TreeModel(2, INFINITY, PotentialDistribution::constant_zero()),
                    std::invalid_argument);
    CHECK_NOTHROW(TreeModel(2, 0.0, PotentialDistribution::constant_zero()));
}

TEST_CASE("moment_2_1p closed forms")
{
    CHECK(PotentialDistribution::constant_zero().moment_2_1p(0.5) == 0.0);
    CHECK(PotentialDistribution::bernoulli_pm1().moment_2_1p(0.5) == 1.0);
    // uniform on [-1,1], p = 1/2: int |q|^3 / 2 = 1/4
    CHECK(std::abs(PotentialDistribution::uniform_symmetric(1.0).moment_2_1p(0.5) - 0.25) <=
          1e-15);
    CHECK_THROWS_AS(PotentialDistribution::bernoulli_pm1().moment_2_1p(1.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(PotentialDistribution::bernoulli_pm1().moment_2_1p(0.0),
                    std::invalid_argument);

    // gaussian s = 2 case reduces to the variance
    const auto g = PotentialDistribution::gaussian(0.7);
    CHECK(std::abs(g.moment_2_1p(1e-12) - 0.49) <= 1e-9);
}

TEST_CASE("moment_2_1p agrees with quadrature")
{
    for (const double p : {0.25, 0.5, 0.75}) {
        const auto u = PotentialDistribution::uniform_symmetric(1.3);
        CHECK(std::abs(u.moment_2_1p(p) - moment_by_quadrature(u, p, 1.3, 20000)) <= 1e-8);
        const auto g = PotentialDistribution::gaussian(0.8);
        CHECK(std::abs(g.moment_2_1p(p) - moment_by_quadrature(g, p, 12.0, 200000)) <= 1e-8);
    }
}

TEST_CASE("sampling: determinism and moment consistency")
{
    const auto u = PotentialDistribution::uniform_symmetric(1.0);

    // identical streams give identical sequences
    CounterRng a(9, 1, 7), b(9, 1, 7);
    for (int i = 0; i < 100; ++i)
        CHECK(u.sample(a) == u.sample(b));

    // CLT bound for the mean of Uniform(-1, 1): 3 sigma / sqrt(n)
    const std::uint64_t n = 1'000'000;
    double mean = 0.0;
    double abs_m3 = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        CounterRng rng(7, 2, i);
        const double q = u.sample(rng);
        mean += q;
        abs_m3 += std::pow(std::abs(q), 3.0);
    }
    mean /= static_cast<double>(n);
    abs_m3 /= static_cast<double>(n);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(12.0 * static_cast<double>(n)));
    // Monte-Carlo 2(1+p) moment lands within 3 standard errors of the closed form
    const double se = std::sqrt((1.0 / 7.0 - 1.0 / 16.0) / static_cast<double>(n));
    CHECK(std::abs(abs_m3 - 0.25) <= 3.0 * se);

    // |q|^{2(1+p)} for the +-1 coin is identically one
    const auto pm = PotentialDistribution::bernoulli_pm1();
    CounterRng rng(3, 3, 3);
    for (int i = 0; i < 1000; ++i)
        CHECK(std::pow(std::abs(pm.sample(rng)), 3.0) == 1.0);

    const auto zero = PotentialDistribution::constant_zero();
    for (int i = 0; i < 10; ++i)
        CHECK(zero.sample(rng) == 0.0);
}
