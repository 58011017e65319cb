#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "bethelab/oracle.hpp"
#include "bethelab/recursion.hpp"

using namespace bethe;

namespace {

TruncatedTree random_tree(int m, int depth, Rooting rooting, std::uint64_t seed)
{
    TruncatedTree tree(m, depth, rooting);
    CounterRng rng(seed, 0, 0);
    tree.fill_potentials(PotentialDistribution::uniform_symmetric(1.0), rng);
    return tree;
}

} // namespace

TEST_CASE("tree shape: vertex counts and budget")
{
    CHECK(TruncatedTree(2, 3, Rooting::forward_subtree).vertex_count() == 15);
    CHECK(TruncatedTree(3, 2, Rooting::forward_subtree).vertex_count() == 13);
    // full lattice root: 1 + (M+1)(M^D - 1)/(M - 1)
    CHECK(TruncatedTree(2, 1, Rooting::full_lattice_root).vertex_count() == 4);
    CHECK(TruncatedTree(2, 2, Rooting::full_lattice_root).vertex_count() == 10);
    CHECK_THROWS_AS(TruncatedTree(2, 30, Rooting::forward_subtree), std::length_error);
    CHECK_THROWS_AS(TruncatedTree(4, 20, Rooting::forward_subtree), std::length_error);
}

TEST_CASE("forward green: fixed point propagates through the free tree")
{
    const SpectralParameter lam(0.0, 0.0);
    const Complex want(0.0, 1.0 / std::sqrt(2.0));
    for (int depth : {0, 1, 4, 9}) {
        TruncatedTree tree(2, depth, Rooting::forward_subtree);
        const Complex got = forward_green(tree, 0.0, lam, LeafPolicy::fixed_point).value();
        CHECK(std::abs(got - want) <= 1e-14);
    }
}

TEST_CASE("forward green: truncated depth-1 value by hand")
{
    // leaves G = -1/i = i, root G = -1/(2i + i) = i/3
    TruncatedTree tree(2, 1, Rooting::forward_subtree);
    const SpectralParameter lam(0.0, 1.0);
    const Complex got = forward_green(tree, 0.0, lam, LeafPolicy::truncate).value();
    CHECK(std::abs(got - Complex(0.0, 1.0 / 3.0)) <= 1e-15);
    CHECK(std::abs(resolvent_oracle(tree, 0.0, lam) - Complex(0.0, 1.0 / 3.0)) <= 1e-12);
}

TEST_CASE("forward green: preconditions")
{
    TruncatedTree tree(2, 2, Rooting::forward_subtree);
    CHECK_THROWS_AS(forward_green(tree, 0.0, SpectralParameter(0.0, 0.0), LeafPolicy::truncate),
                    std::domain_error);
    CHECK_THROWS_AS(
        forward_green(tree, 0.5, SpectralParameter(0.0, 0.0), LeafPolicy::fixed_point),
        std::domain_error);
    TruncatedTree root_tree(2, 2, Rooting::full_lattice_root);
    CHECK_THROWS_AS(forward_green(root_tree, 0.0, SpectralParameter(0.0, 1.0),
                                  LeafPolicy::truncate),
                    std::invalid_argument);
    CHECK_THROWS_AS(root_green(tree, 0.0, SpectralParameter(0.0, 1.0), LeafPolicy::truncate),
                    std::invalid_argument);
}

TEST_CASE("root green: free closed forms -1/((M+1) z_fp + lambda)")
{
    const SpectralParameter lam(0.0, 0.0);
    TruncatedTree t2(2, 3, Rooting::full_lattice_root);
    const Complex g2 = root_green(t2, 0.0, lam, LeafPolicy::fixed_point).value();
    CHECK(std::abs(g2 - Complex(0.0, std::sqrt(2.0) / 3.0)) <= 1e-14);

    TruncatedTree t3(3, 3, Rooting::full_lattice_root);
    const Complex g3 = root_green(t3, 0.0, lam, LeafPolicy::fixed_point).value();
    CHECK(std::abs(g3 - Complex(0.0, std::sqrt(3.0) / 4.0)) <= 1e-14);

    // sparse-solve cross-check where truncation converges: the per-level
    // contraction factor M |z_fp|^2 is 1/2 at lambda = i, so depth 14 puts
    // the truncation error near 2^-14
    const SpectralParameter lam_i(0.0, 1.0);
    TruncatedTree deep(2, 14, Rooting::full_lattice_root);
    const Complex oracle = resolvent_oracle(deep, 0.0, lam_i);
    const Complex closed = root_green(deep, 0.0, lam_i, LeafPolicy::fixed_point).value();
    CHECK(std::abs(oracle - closed) <= 1e-3 * std::abs(closed));
}

TEST_CASE("root green: continuity in the coupling at fixed realization")
{
    const SpectralParameter lam(0.3, 0.05);
    TruncatedTree tree = random_tree(2, 6, Rooting::full_lattice_root, 77);
    const Complex a = root_green(tree, 0.0, lam, LeafPolicy::truncate).value();
    const Complex b = root_green(tree, 1e-9, lam, LeafPolicy::truncate).value();
    CHECK(std::abs(a - b) <= 1e-6);
}

TEST_CASE("resolvent oracle: single site and small trees by hand")
{
    // 1x1: <delta, (kq - lambda)^{-1} delta> with q = 2, k = 1, lambda = i
    TruncatedTree site(2, 0, Rooting::forward_subtree);
    site.set_potential(0, 2.0);
    const Complex got = resolvent_oracle(site, 1.0, SpectralParameter(0.0, 1.0));
    CHECK(std::abs(got - Complex(2.0, 1.0) / 5.0) <= 1e-15);

    // oracle requires an interior spectral parameter
    CHECK_THROWS_AS(resolvent_oracle(site, 1.0, SpectralParameter(0.0, 0.0)),
                    std::domain_error);
    // and enforces its vertex budget
    TruncatedTree big(2, 12, Rooting::forward_subtree);
    CHECK_THROWS_AS(resolvent_oracle(big, 0.0, SpectralParameter(0.0, 1.0), 1000),
                    std::length_error);
}

TEST_CASE("oracle equivalence: truncated recursion equals the sparse solve")
{
    const SpectralParameter lam(0.5, 0.01);
    for (const int m : {2, 3}) {
        for (int depth = 1; depth <= 6; ++depth) {
            for (int trial = 0; trial < 5; ++trial) {
                const auto seed = static_cast<std::uint64_t>(1000 * m + 10 * depth + trial);
                TruncatedTree fwd = random_tree(m, depth, Rooting::forward_subtree, seed);
                const Complex rec = forward_green(fwd, 0.3, lam, LeafPolicy::truncate).value();
                const Complex orc = resolvent_oracle(fwd, 0.3, lam);
                CHECK(std::abs(rec - orc) <= 1e-10 * std::abs(orc));
                CHECK(rec.imag() > 0.0);

                TruncatedTree root = random_tree(m, depth, Rooting::full_lattice_root, seed + 1);
                const Complex rec_r = root_green(root, 0.3, lam, LeafPolicy::truncate).value();
                const Complex orc_r = resolvent_oracle(root, 0.3, lam);
                CHECK(std::abs(rec_r - orc_r) <= 1e-10 * std::abs(orc_r));
                CHECK(rec_r.imag() > 0.0);
            }
        }
    }
}

TEST_CASE("free-case convergence: truncate tends to the fixed point geometrically")
{
    // per-level error factor is M |z_fp|^2 = 1/2 at lambda = i
    const SpectralParameter lam(0.0, 1.0);
    const Complex z_fp = fixed_point(2, lam).value();
    std::vector<double> errors;
    for (int depth = 1; depth <= 10; ++depth) {
        TruncatedTree tree(2, depth, Rooting::forward_subtree);
        const Complex g = forward_green(tree, 0.0, lam, LeafPolicy::truncate).value();
        errors.push_back(std::abs(g - z_fp));
    }
    for (std::size_t i = 1; i < errors.size(); ++i)
        CHECK(errors[i] < 0.75 * errors[i - 1]);
    CHECK(errors.back() < 1e-2 * errors.front());
}

TEST_CASE("forward green is invariant under permuting child subtrees")
{
    const SpectralParameter lam(0.2, 0.05);
    const int m = 3, depth = 3;
    TruncatedTree tree = random_tree(m, depth, Rooting::forward_subtree, 91);

    // rotate the three child-subtree potential blocks level by level
    TruncatedTree rotated(m, depth, Rooting::forward_subtree);
    rotated.set_potential(0, tree.potential(0));
    for (int level = 1; level <= depth; ++level) {
        const std::size_t block = tree.level_size(level) / static_cast<std::size_t>(m);
        const std::size_t off = tree.level_offset(level);
        for (std::size_t c = 0; c < static_cast<std::size_t>(m); ++c) {
            const std::size_t src = off + c * block;
            const std::size_t dst = off + ((c + 1) % m) * block;
            for (std::size_t j = 0; j < block; ++j)
                rotated.set_potential(dst + j, tree.potential(src + j));
        }
    }
    const Complex a = forward_green(tree, 0.4, lam, LeafPolicy::truncate).value();
    const Complex b = forward_green(rotated, 0.4, lam, LeafPolicy::truncate).value();
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
}

TEST_CASE("population dynamics: free case sticks to the fixed point")
{
    const TreeModel model(2, 0.0, PotentialDistribution::uniform_symmetric(1.0));
    const SpectralParameter lam(0.7, 1e-3);
    const Complex z_fp = fixed_point(2, lam).value();
    PopulationConfig cfg;
    cfg.pool_size = 2000;
    cfg.iterations = 100;
    const auto pool = population_dynamics(model, lam, cfg, 5);
    double worst = 0.0;
    for (const Complex z : pool)
        worst = std::max(worst, std::abs(z - z_fp));
    CHECK(worst <= 1e-8);
}

TEST_CASE("population dynamics: pool stays in the half-plane, even for N = 1")
{
    const TreeModel model(2, 0.3, PotentialDistribution::uniform_symmetric(1.0));
    const SpectralParameter lam(1.0, 0.1);
    PopulationConfig cfg;
    cfg.pool_size = 1;
    cfg.iterations = 200;
    std::uint64_t flagged = population_dynamics_run(
        model, lam, cfg, 17, [&](int, std::span<const Complex> pool) {
            REQUIRE(pool.size() == 1);
            CHECK(pool[0].imag() > 0.0);
        });
    CHECK(flagged == 0);
}

TEST_CASE("population dynamics: worker count does not change the pool")
{
    const TreeModel model(2, 0.2, PotentialDistribution::uniform_symmetric(1.0));
    const SpectralParameter lam(0.5, 0.01);
    PopulationConfig one;
    one.pool_size = 3000;
    one.iterations = 40;
    one.workers = 1;
    PopulationConfig four = one;
    four.workers = 4;
    const auto pa = population_dynamics(model, lam, one, 23);
    const auto pb = population_dynamics(model, lam, four, 23);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i)
        CHECK(pa[i] == pb[i]);
}
