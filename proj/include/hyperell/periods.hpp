#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hyperell/chebyshev.hpp"
#include "hyperell/continuation.hpp"
#include "hyperell/curve.hpp"
#include "hyperell/homology.hpp"

namespace hyperell {

enum class InfiniteMethod { kMobius, kLocalCoordinate };

struct PeriodOptions {
  int nc = kDefaultNc;
  int nc_max = kMaxNc;
  bool auto_double = true;
  // Cross-check the Moebius route for the infinite cut against the
  // 1/sqrt(z) local-coordinate route.
  bool verify_infinite = false;
  // Doubling is triggered while err stays above this target.
  double err_target = 1e-10;
  // Relative cut width below which the adjacent gap integrals switch to the
  // split local-coordinate integrator.
  double degenerate_threshold = 1e-3;
};

/// Line integrals of the holomorphic differentials over the inter-branch-
/// point segments together with the sign-resolved period matrices.
///
/// line_integrals holds I_{jk} = 2 * int_{z_j}^{z_{j+1}} nu_k with the row
/// signs already made globally consistent: odd rows (the cuts) carry the
/// SVD null-vector signs, even rows (the gaps) the signs fixed through the
/// symmetry of the Riemann matrix.
struct PeriodData {
  Curve curve;
  CutSystem cuts;
  Eigen::MatrixXcd line_integrals;  // (2g+1) x g
  Eigen::MatrixXcd a_full;          // (g+1) x g, signed; row 0 is the a_0 row
  Eigen::MatrixXcd a_periods;       // g x g
  Eigen::MatrixXcd b_periods;       // g x g
  Eigen::MatrixXcd riemann;         // 2 pi i * b_periods * a_periods^{-1}
  Eigen::VectorXd a_signs;          // g+1 entries, +-1
  Eigen::VectorXd b_signs;          // g entries, +-1
  double err = 0.0;
  int nc_used = 0;
  std::vector<std::string> warnings;

  int genus() const { return static_cast<int>(a_periods.rows()); }
  /// Coefficients c = 2 pi i * a_periods^{-1}; column j holds the expansion
  /// of the normalized differential omega_j in the monomial basis nu_i.
  Eigen::MatrixXcd normalization() const;
};

PeriodData compute_periods(const Curve& curve, const CutSystem& cuts,
                           const PeriodOptions& opts = {});

/// All g differentials at once for one segment; the overall row sign is
/// local to the segment and resolved a posteriori by the caller.
Eigen::RowVectorXcd finite_segment_row(const Curve& curve, cplx za, cplx zb,
                                       int nc);
Eigen::RowVectorXcd infinite_segment_row(const Curve& curve,
                                         const CutSystem& cuts, int nc,
                                         InfiniteMethod method);
Eigen::RowVectorXcd degenerate_segment_row(const Curve& curve,
                                           const CutSystem& cuts,
                                           int even_segment, int nc);

/// Single-differential wrappers (k = 1..g).
cplx segment_integral_finite(cplx za, cplx zb, const Curve& curve, int k,
                             int nc);
cplx segment_integral_infinite(const Curve& curve, const CutSystem& cuts,
                               int k, int nc, InfiniteMethod method);
cplx segment_integral_degenerate(const Curve& curve, const CutSystem& cuts,
                                 int even_segment, int k, int nc);

struct ASignResolution {
  Eigen::VectorXd signs;         // g+1 entries, +-1
  Eigen::MatrixXcd signed_full;  // (g+1) x g
  Eigen::MatrixXcd a_periods;    // rows 1..g of signed_full
};

/// Finds the left null vector of the (g+1) x g a-period candidates through a
/// singular value decomposition, checks it is a +-1 vector and applies it.
ASignResolution resolve_a_signs(const Eigen::MatrixXcd& a_full,
                                double tol_sign = 1e-6);

struct BSignResolution {
  Eigen::VectorXd signs;       // g entries, +-1 (after the overall flip)
  Eigen::MatrixXcd b_periods;  // g x g
  Eigen::MatrixXcd riemann;    // g x g
};

/// Determines the signs of the gap integrals (rows I_{2i,k}) from the g-1
/// first-off-diagonal symmetry conditions on Re B and fixes the overall sign
/// by negative definiteness of Re B.
BSignResolution resolve_b_signs(const Eigen::MatrixXcd& a_periods,
                                const Eigen::MatrixXcd& gap_rows,
                                double tol_sign = 1e-6,
                                std::vector<std::string>* warnings = nullptr);

Eigen::MatrixXcd riemann_matrix(const Eigen::MatrixXcd& a_periods,
                                const Eigen::MatrixXcd& b_periods,
                                std::vector<std::string>* warnings = nullptr);

/// max of the largest |column sum| of the signed a-period candidates and the
/// largest entry of |Re(B - B^T)|.
double consistency_error(const Eigen::MatrixXcd& signed_a_full,
                         const Eigen::MatrixXcd& riemann);

bool negative_definite_real_part(const Eigen::MatrixXcd& riemann);

}  // namespace hyperell
