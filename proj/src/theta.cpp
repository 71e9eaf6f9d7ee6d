#include "hyperell/theta.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "hyperell/jacobian.hpp"

namespace hyperell {

namespace {

const cplx kImag{0.0, 1.0};

struct KahanSum {
  cplx sum{0.0, 0.0};
  cplx carry{0.0, 0.0};
  void add(cplx v) {
    const cplx y = v - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double smallest_decay_eigenvalue(const Eigen::MatrixXcd& riemann) {
  const Eigen::MatrixXd re = riemann.real();
  const Eigen::MatrixXd sym = -0.5 * (re + re.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return es.eigenvalues().minCoeff();
}

double linear_bound(const Eigen::MatrixXcd& riemann) {
  // |Re z0_j| over the fundamental domain plus the cube-center slack
  double row_sum = 0.0;
  const Eigen::MatrixXd re = riemann.real();
  for (int j = 0; j < re.rows(); ++j)
    row_sum = std::max(row_sum, re.row(j).cwiseAbs().sum());
  return row_sum;  // row_sum/2 for |Re z0| plus row_sum/2 for the offset
}

}  // namespace

int truncation_radius(const Eigen::MatrixXcd& riemann, const Eigen::VectorXd& p,
                      double tol) {
  if (tol < 1e-16 || tol >= 1.0)
    throw std::invalid_argument("theta tolerance must lie in [1e-16, 1)");
  const double lambda = smallest_decay_eigenvalue(riemann);
  if (lambda <= 0.0)
    throw std::invalid_argument("Re(B) must be negative definite");
  const double b = linear_bound(riemann);
  const double rho =
      (b + std::sqrt(b * b + 2.0 * lambda * std::log(1.0 / tol))) / lambda;
  const double p_inf = p.size() ? p.cwiseAbs().maxCoeff() : 0.0;
  return static_cast<int>(std::ceil(1.0 + p_inf + rho));
}

ThetaFunction::ThetaFunction(Eigen::MatrixXcd riemann, Eigen::VectorXd p,
                             Eigen::VectorXd q, double tol)
    : riemann_(std::move(riemann)), p_(std::move(p)), q_(std::move(q)),
      tol_(tol) {
  genus_ = static_cast<int>(riemann_.rows());
  if (riemann_.cols() != genus_ || p_.size() != genus_ || q_.size() != genus_)
    throw std::invalid_argument("theta dimensions are inconsistent");
  lambda_min_ = smallest_decay_eigenvalue(riemann_);
  if (lambda_min_ <= 0.0)
    throw std::invalid_argument("Re(B) must be negative definite");
  radius_ = truncation_radius(riemann_, p_, tol_);

  double work = 1.0;
  for (int i = 0; i < genus_; ++i) work *= 2.0 * radius_ + 1.0;
  if (work > 2e8)
    throw std::invalid_argument(
        "theta summation cube too large; Re(B) is too close to degenerate");

  shift_phase_ = std::exp(kImag * kPi * p_.sum());

  // Precompute the lattice terms that can contribute for any reduced
  // argument: 1/2 <Re B x, x> plus the worst-case linear part must beat the
  // tolerance cutoff.
  const Eigen::MatrixXd re_b = riemann_.real();
  Eigen::VectorXd lin_bound(genus_);
  for (int j = 0; j < genus_; ++j)
    lin_bound(j) = 0.5 * re_b.row(j).cwiseAbs().sum();
  const double cutoff = -(std::log(1.0 / tol_) + 16.0);

  Eigen::VectorXi idx(genus_), lo(genus_), hi(genus_);
  for (int i = 0; i < genus_; ++i) {
    const int rp = static_cast<int>(std::lround(p_(i)));
    lo(i) = -radius_ - rp;
    hi(i) = radius_ - rp;
    idx(i) = lo(i);
  }
  while (true) {
    Term t;
    t.x = idx.cast<double>() + p_;
    const double quad_re = 0.5 * t.x.dot(re_b * t.x);
    double lin = 0.0;
    int n_sum = 0;
    for (int i = 0; i < genus_; ++i) {
      lin += lin_bound(i) * std::abs(t.x(i));
      n_sum += idx(i);
    }
    if (quad_re + lin >= cutoff) {
      const Eigen::VectorXcd bx = riemann_ * t.x.cast<cplx>();
      cplx half_quad{0.0, 0.0};
      for (int i = 0; i < genus_; ++i) half_quad += bx(i) * t.x(i);
      t.half_quad = 0.5 * half_quad;
      t.re_quad = quad_re;
      t.sign_shift = (n_sum % 2 == 0) ? 1.0 : -1.0;
      terms_.push_back(std::move(t));
    }
    int d = 0;
    while (d < genus_ && idx(d) == hi(d)) {
      idx(d) = lo(d);
      ++d;
    }
    if (d == genus_) break;
    ++idx(d);
  }
}

template <bool WithDerivs, bool WithShift>
void ThetaFunction::accumulate(const Eigen::VectorXcd& z,
                               const Eigen::VectorXcd& u1,
                               const Eigen::VectorXcd& u2, Derivs& plain,
                               Derivs& shifted) const {
  const JacobianPoint red = reduce_to_fundamental(z, riemann_);
  const Eigen::VectorXcd& z0 = red.reduced;
  const Eigen::VectorXcd lin = z0 + (2.0 * kPi * kImag) * q_.cast<cplx>();
  const double skip_cut = -(std::log(1.0 / tol_) + 14.0);

  KahanSum acc[8];
  for (const Term& t : terms_) {
    cplx lin_term{0.0, 0.0};
    for (int i = 0; i < genus_; ++i) lin_term += lin(i) * t.x(i);
    if (t.re_quad + lin_term.real() < skip_cut) continue;
    const cplx term = std::exp(t.half_quad + lin_term);
    acc[0].add(term);
    cplx du1{0.0, 0.0}, du2{0.0, 0.0};
    if constexpr (WithDerivs) {
      for (int i = 0; i < genus_; ++i) {
        du1 += t.x(i) * u1(i);
        du2 += t.x(i) * u2(i);
      }
      acc[1].add(du1 * term);
      acc[2].add(du2 * term);
      acc[3].add(du1 * du2 * term);
    }
    if constexpr (WithShift) {
      const cplx sterm = term * t.sign_shift;
      acc[4].add(sterm);
      if constexpr (WithDerivs) {
        acc[5].add(du1 * sterm);
        acc[6].add(du2 * sterm);
        acc[7].add(du1 * du2 * sterm);
      }
    }
  }

  // periodicity factor for z = z0 + 2 pi i m + B n, with the derivative
  // corrections induced by the -<z0, n> term
  const Eigen::VectorXd m = red.m.cast<double>();
  const Eigen::VectorXd n = red.n.cast<double>();
  cplx phi = (2.0 * kPi * kImag) * (p_.dot(m) - q_.dot(n));
  const Eigen::VectorXcd bn = riemann_ * n.cast<cplx>();
  for (int i = 0; i < genus_; ++i)
    phi -= 0.5 * bn(i) * n(i) + z0(i) * n(i);
  const cplx factor = std::exp(phi);

  cplx nu1{0.0, 0.0}, nu2{0.0, 0.0};
  if constexpr (WithDerivs) {
    for (int i = 0; i < genus_; ++i) {
      nu1 += n(i) * u1(i);
      nu2 += n(i) * u2(i);
    }
  }
  auto assemble = [&](const KahanSum* a, cplx f) {
    Derivs d;
    d.value = f * a[0].sum;
    if constexpr (WithDerivs) {
      d.d1 = f * (a[1].sum - nu1 * a[0].sum);
      d.d2 = f * (a[2].sum - nu2 * a[0].sum);
      d.d12 = f * (a[3].sum - nu1 * a[2].sum - nu2 * a[1].sum +
                   nu1 * nu2 * a[0].sum);
    }
    return d;
  };
  plain = assemble(acc, factor);
  if constexpr (WithShift) {
    // Theta(z + i pi delta): the reduction shift contributes exp(-i pi <delta, n>).
    double par = 0.0;
    for (int i = 0; i < genus_; ++i) par += n(i);
    const cplx f_shift =
        factor * shift_phase_ * std::exp(-kImag * kPi * par);
    shifted = assemble(acc + 4, f_shift);
  }
}

cplx ThetaFunction::value(const Eigen::VectorXcd& z) const {
  Derivs plain, shifted;
  Eigen::VectorXcd dummy = Eigen::VectorXcd::Zero(genus_);
  accumulate<false, false>(z, dummy, dummy, plain, shifted);
  return plain.value;
}

ThetaFunction::Derivs ThetaFunction::derivatives(
    const Eigen::VectorXcd& z, const Eigen::VectorXcd& u1,
    const Eigen::VectorXcd& u2) const {
  Derivs plain, shifted;
  accumulate<true, false>(z, u1, u2, plain, shifted);
  return plain;
}

std::pair<ThetaFunction::Derivs, ThetaFunction::Derivs>
ThetaFunction::derivatives_with_shift(const Eigen::VectorXcd& z,
                                      const Eigen::VectorXcd& u1,
                                      const Eigen::VectorXcd& u2) const {
  Derivs plain, shifted;
  accumulate<true, true>(z, u1, u2, plain, shifted);
  return {plain, shifted};
}

cplx theta(const Eigen::VectorXcd& z, const Eigen::MatrixXcd& riemann,
           const Eigen::VectorXd& p, const Eigen::VectorXd& q, double tol) {
  return ThetaFunction(riemann, p, q, tol).value(z);
}

ThetaFunction::Derivs theta_derivatives(
    const Eigen::VectorXcd& z, const Eigen::MatrixXcd& riemann,
    const Eigen::VectorXd& p, const Eigen::VectorXd& q,
    const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2, double tol) {
  return ThetaFunction(riemann, p, q, tol).derivatives(z, u1, u2);
}

cplx theta_via_zero_char(const Eigen::VectorXcd& z,
                         const Eigen::MatrixXcd& riemann,
                         const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                         double tol) {
  const int g = static_cast<int>(z.size());
  const Eigen::VectorXcd shift =
      riemann * p.cast<cplx>() + (2.0 * kPi * kImag) * q.cast<cplx>();
  cplx expo{0.0, 0.0};
  const Eigen::VectorXcd bp = riemann * p.cast<cplx>();
  for (int i = 0; i < g; ++i)
    expo += 0.5 * bp(i) * p(i) +
            p(i) * (z(i) + (2.0 * kPi * kImag) * q(i));
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(g);
  return std::exp(expo) *
         ThetaFunction(riemann, zero, zero, tol).value(z + shift);
}

}  // namespace hyperell
