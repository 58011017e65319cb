#pragma once

#include "bethelab/halfplane.hpp"
#include "bethelab/recursion.hpp"

namespace bethe {

// Diagonal resolvent entry <delta_root, (H - lambda)^{-1} delta_root> on the
// explicit tree, computed by a generic sparse LU factorization of the
// assembled adjacency-plus-diagonal matrix.  Deliberately shares no code
// with the level-by-level recursion it cross-checks.
// Requires eta > 0 and vertex_count <= budget; throws std::runtime_error
// with the residual norm if the factorization or solve breaks down.
Complex resolvent_oracle(const TruncatedTree& tree, double coupling,
                         const SpectralParameter& lambda,
                         std::size_t vertex_budget = 1'000'000);

} // namespace bethe
