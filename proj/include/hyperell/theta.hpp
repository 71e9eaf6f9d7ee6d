#pragma once

#include <Eigen/Core>
#include <vector>

#include "hyperell/types.hpp"

namespace hyperell {

/// Multidimensional theta function with real characteristics,
///
///   Theta_pq(z, B) = sum_{N in Z^g} exp{ 1/2 <B(N+p), N+p>
///                                        + <z + 2 pi i q, N+p> },
///
/// where <.,.> is the bilinear sum of products.  The characteristic q
/// enters through the imaginary shift 2 pi i q, matching the lattice
/// convention z = 2 pi i p + B q of the Jacobian: half-integer (p, q) then
/// give even/odd functions and the usual half-period behaviour.
///
/// Periodicity:
///   Theta_pq(z + 2 pi i e_j) = exp(2 pi i p_j) Theta_pq(z)
///   Theta_pq(z + B e_j)      = exp(-(z_j + 2 pi i q_j) - B_jj/2) Theta_pq(z)
///
/// Arguments are first reduced to the fundamental domain; the series is
/// summed over a cube whose radius guarantees the discarded tail stays
/// below the requested tolerance, and the exact periodicity factors are
/// reapplied (including the induced corrections for derivatives).
class ThetaFunction {
 public:
  ThetaFunction(Eigen::MatrixXcd riemann, Eigen::VectorXd p, Eigen::VectorXd q,
                double tol = 1e-14);

  int genus() const { return genus_; }
  int radius() const { return radius_; }

  cplx value(const Eigen::VectorXcd& z) const;

  struct Derivs {
    cplx value;
    cplx d1;   // directional derivative along u1
    cplx d2;   // along u2
    cplx d12;  // mixed second derivative
  };
  Derivs derivatives(const Eigen::VectorXcd& z, const Eigen::VectorXcd& u1,
                     const Eigen::VectorXcd& u2) const;

  /// Both Theta at z and at z + i pi delta (delta the all-ones vector) from
  /// one sweep of the term list; the shift only multiplies each term by a
  /// sign and a constant phase.
  std::pair<Derivs, Derivs> derivatives_with_shift(
      const Eigen::VectorXcd& z, const Eigen::VectorXcd& u1,
      const Eigen::VectorXcd& u2) const;

 private:
  struct Term {
    Eigen::VectorXd x;    // N + p
    cplx half_quad;       // 1/2 <B x, x>
    double re_quad;       // real part of half_quad
    double sign_shift;    // (-1)^{sum N}
  };

  template <bool WithDerivs, bool WithShift>
  void accumulate(const Eigen::VectorXcd& z, const Eigen::VectorXcd& u1,
                  const Eigen::VectorXcd& u2, Derivs& plain,
                  Derivs& shifted) const;

  Eigen::MatrixXcd riemann_;
  Eigen::VectorXd p_, q_;
  double tol_;
  int genus_ = 0;
  int radius_ = 0;
  double lambda_min_ = 0.0;
  cplx shift_phase_{1.0, 0.0};  // exp(i pi sum p)
  std::vector<Term> terms_;
};

/// Convenience single evaluations.
cplx theta(const Eigen::VectorXcd& z, const Eigen::MatrixXcd& riemann,
           const Eigen::VectorXd& p, const Eigen::VectorXd& q,
           double tol = 1e-14);
ThetaFunction::Derivs theta_derivatives(const Eigen::VectorXcd& z,
                                        const Eigen::MatrixXcd& riemann,
                                        const Eigen::VectorXd& p,
                                        const Eigen::VectorXd& q,
                                        const Eigen::VectorXcd& u1,
                                        const Eigen::VectorXcd& u2,
                                        double tol = 1e-14);

/// Alternate evaluation through the zero-characteristic function:
/// Theta_pq(z) = Theta(z + B p + 2 pi i q) exp{1/2 <B p, p> + <p, z + 2 pi i q>}.
cplx theta_via_zero_char(const Eigen::VectorXcd& z,
                         const Eigen::MatrixXcd& riemann,
                         const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                         double tol = 1e-14);

/// Summation radius guaranteeing a series tail below tol for any reduced
/// argument: R = ceil(1 + |p|_inf + (b + sqrt(b^2 + 2 lambda ln(1/tol)))
/// / lambda) with lambda the smallest eigenvalue of -Re B and b a bound on
/// the linear exponent coefficients over the fundamental domain.
int truncation_radius(const Eigen::MatrixXcd& riemann, const Eigen::VectorXd& p,
                      double tol);

}  // namespace hyperell
