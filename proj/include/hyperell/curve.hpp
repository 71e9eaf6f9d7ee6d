#pragma once

#include <optional>
#include <vector>

#include "hyperell/types.hpp"

namespace hyperell {

/// A hyperelliptic curve mu^2 = a_N * prod_i (z - z_i) in Weierstrass normal
/// form.  The finite branch points are the z_i; for an odd number of finite
/// points the curve is additionally branched at infinity.
struct Curve {
  std::vector<cplx> finite_points;
  bool branched_at_infinity = false;
  int genus = 0;
  cplx leading_coefficient{1.0, 0.0};
  // Present only when the curve was constructed from polynomial
  // coefficients (a_0 .. a_N, ascending powers).
  std::optional<std::vector<cplx>> coefficients;

  int finite_count() const { return static_cast<int>(finite_points.size()); }
  int branch_count() const {
    return finite_count() + (branched_at_infinity ? 1 : 0);
  }
  double scale() const;  // largest pairwise distance of finite points
};

/// Genus from the number N of finite branch points (equivalently the degree
/// of the defining polynomial): N/2 - 1 for even N, (N-1)/2 for odd N.
int genus_of(int finite_branch_point_count);

/// Ratio of the largest to the smallest pairwise distance between finite
/// branch points.  Requires at least two finite points.
double separation_ratio(const std::vector<cplx>& finite_points);
double separation_ratio(const Curve& curve);

/// Branch points as the roots of a_N z^N + ... + a_0, computed through the
/// eigenvalues of the companion matrix.  Rejects a_N = 0, N < 3, repeated
/// roots and separation ratios >= 1e6 (such curves must be entered as
/// explicit branch points or cut pairs).
Curve curve_from_coefficients(const std::vector<cplx>& coefficients);

/// Branch points given directly.  Rejects repeated points and N < 3.
Curve curve_from_branch_points(std::vector<cplx> points);

}  // namespace hyperell
