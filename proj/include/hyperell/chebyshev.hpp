#pragma once

#include <Eigen/Core>

#include "hyperell/types.hpp"

namespace hyperell {

/// Clenshaw-Curtis rule on [-1,1]: nodes s_j = cos(j pi / N) descending from
/// 1 to -1 and the matching interpolatory weights (exact for polynomials of
/// degree <= N, weights summing to 2).
struct QuadratureRule {
  int order = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Cached rule for a given order (N >= 1).
const QuadratureRule& clenshaw_curtis_rule(int order);

/// Cached spectral differentiation matrix on the Chebyshev nodes of the
/// given order; exact for polynomials of degree <= N, rows sum to zero.
const Eigen::MatrixXd& chebyshev_diff_matrix(int order);

inline constexpr int kDefaultNc = 128;
inline constexpr int kMaxNc = 4096;

}  // namespace hyperell
