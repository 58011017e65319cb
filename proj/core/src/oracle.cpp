#include "bethelab/oracle.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace bethe {

Complex resolvent_oracle(const TruncatedTree& tree, double coupling,
                         const SpectralParameter& lambda, std::size_t vertex_budget)
{
    lambda.require_interior();
    const std::size_t n = tree.vertex_count();
    if (n > vertex_budget)
        throw std::length_error("resolvent_oracle: tree has " + std::to_string(n) +
                                " vertices, budget is " + std::to_string(vertex_budget));

    using SpMat = Eigen::SparseMatrix<Complex>;
    using Triplet = Eigen::Triplet<Complex>;

    std::vector<Triplet> entries;
    entries.reserve(3 * n);
    const Complex lam = lambda.value();
    for (std::size_t v = 0; v < n; ++v)
        entries.emplace_back(static_cast<int>(v), static_cast<int>(v),
                             coupling * tree.potential(v) - lam);
    for (int level = 0; level < tree.depth(); ++level) {
        const std::size_t offset = tree.level_offset(level);
        const std::size_t width = tree.level_size(level);
        const std::size_t fanout =
            (level == 0 && tree.rooting() == Rooting::full_lattice_root)
                ? static_cast<std::size_t>(tree.branching()) + 1
                : static_cast<std::size_t>(tree.branching());
        for (std::size_t j = 0; j < width; ++j) {
            const auto parent = static_cast<int>(offset + j);
            const std::size_t child0 = tree.child_begin(level, j);
            for (std::size_t c = 0; c < fanout; ++c) {
                const auto child = static_cast<int>(child0 + c);
                entries.emplace_back(parent, child, Complex(1.0, 0.0));
                entries.emplace_back(child, parent, Complex(1.0, 0.0));
            }
        }
    }

    SpMat h_minus_lambda(static_cast<int>(n), static_cast<int>(n));
    h_minus_lambda.setFromTriplets(entries.begin(), entries.end());
    h_minus_lambda.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> solver;
    solver.analyzePattern(h_minus_lambda);
    solver.factorize(h_minus_lambda);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("resolvent_oracle: sparse LU factorization failed");

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    rhs(0) = 1.0;
    Eigen::VectorXcd x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("resolvent_oracle: sparse solve failed");

    const double residual = (h_minus_lambda * x - rhs).norm();
    if (!(residual < 1e-8))
        throw std::runtime_error("resolvent_oracle: solver breakdown, residual norm " +
                                 std::to_string(residual));
    return x(0);
}

} // namespace bethe
