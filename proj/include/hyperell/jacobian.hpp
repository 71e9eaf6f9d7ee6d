#pragma once

#include <Eigen/Core>

#include "hyperell/periods.hpp"

namespace hyperell {

/// Point on the two-sheeted covering.  The sheet sign is measured against
/// the reference root sqrt(a_N) * sqrt(prod (z - z_i)) built from principal
/// square roots; it is irrelevant when z is a branch point.
struct SurfacePoint {
  cplx z{0.0, 0.0};
  int sheet = +1;
  bool at_infinity = false;

  static SurfacePoint infinity(int sheet = +1) {
    SurfacePoint p;
    p.at_infinity = true;
    p.sheet = sheet;
    return p;
  }
};

/// Vector in C^g decomposed over the period lattice: raw = 2 pi i (p + m) +
/// B (q + n) with the fractional parts in the half-open box (-1/2, 1/2].
struct JacobianPoint {
  Eigen::VectorXcd raw;
  Eigen::VectorXcd reduced;  // 2 pi i p + B q
  Eigen::VectorXd p, q;
  Eigen::VectorXi m, n;
};

/// Splits v over the lattice basis {2 pi i e_j, B e_j}; always solvable
/// since Re B is negative definite.  Fractional parts within 1e-12 of -1/2
/// are mapped to +1/2.
JacobianPoint reduce_to_fundamental(const Eigen::VectorXcd& v,
                                    const Eigen::MatrixXcd& riemann);

enum class Parity { kEven, kOdd };

/// Parity of a half-integer characteristic: even iff 4<p,q> = 0 mod 2.
Parity characteristic_parity(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& q);

/// Integral of the normalized differentials from P0 to P, reduced to the
/// fundamental domain.  The path runs from the branch point nearest to each
/// endpoint in the local coordinate sqrt(z - E), through the chain of
/// half-segments between branch points; a point covering infinity on a curve
/// with no branching there is reached through an intermediate point.
JacobianPoint abel_map(const SurfacePoint& P, const SurfacePoint& P0,
                       const PeriodData& periods, int nc = kDefaultNc);

/// Abel map between two branch points (entries of the cut-system sequence,
/// 1-based), as the half sum of the sign-resolved segment integrals, in the
/// normalized basis.  Not reduced.
Eigen::VectorXcd abel_between_branch_points(int entry_a, int entry_b,
                                            const PeriodData& periods);

}  // namespace hyperell
