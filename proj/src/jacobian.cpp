#include "hyperell/jacobian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace hyperell {

namespace {

const cplx kImag{0.0, 1.0};

double branch_agreement(cplx a, cplx b) {
  return (std::abs(a - b) <= std::abs(a + b)) ? 1.0 : -1.0;
}

cplx ipow(cplx base, int n) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

// Entry index (1-based, entry 1 possibly infinite) of a finite branch point.
int entry_of(const CutSystem& cuts, cplx z, double tol) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int e = cuts.starts_at_infinity ? 2 : 1; e <= cuts.sequence_length();
       ++e) {
    const double d = std::abs(cuts.entry(e) - z);
    if (d < best_d) {
      best_d = d;
      best = e;
    }
  }
  if (best < 0 || best_d > tol)
    throw std::invalid_argument("point is not a branch point of the cut system");
  return best;
}

int nearest_branch(const Curve& curve, cplx z) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < curve.finite_count(); ++i) {
    const double d = std::abs(curve.finite_points[static_cast<size_t>(i)] - z);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

cplx reference_root(const Curve& curve, cplx z) {
  cplx prod{1.0, 0.0};
  for (const cplx& zi : curve.finite_points) prod *= z - zi;
  return std::sqrt(curve.leading_coefficient) * std::sqrt(prod);
}

struct EndpointPiece {
  Eigen::RowVectorXcd integral;  // int_E^P nu (on the sheet of P)
  int anchor_entry = 1;
};

// int_E^{zP} nu in the local coordinate s = sqrt(z - E); the continuation
// starts with the principal root at the first collocation sample (the P
// end), and the result is flipped onto the requested sheet, measured
// against the principal reference root at zP.
EndpointPiece finite_point_piece(const SurfacePoint& P,
                                 const PeriodData& periods, int nc) {
  const Curve& curve = periods.curve;
  const int g = curve.genus;
  const double scale = std::max(curve.scale(), 1.0);
  const int ie = nearest_branch(curve, P.z);
  const cplx e = curve.finite_points[static_cast<size_t>(ie)];

  EndpointPiece out;
  out.anchor_entry = entry_of(periods.cuts, e, 1e-9 * scale);
  out.integral = Eigen::RowVectorXcd::Zero(g);
  if (std::abs(P.z - e) <= 1e-12 * scale) return out;  // P is a branch point

  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  const cplx sf = std::sqrt(P.z - e);
  std::vector<cplx> z(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    const cplx s = sf * (0.5 * (rule.nodes(j) + 1.0));
    z[static_cast<size_t>(j)] = e + s * s;
  }
  const int excl[1] = {ie};
  SampledRoot root = continue_root(z, curve, excl);

  for (int j = 0; j <= nc; ++j) {
    const cplx base = rule.weights(j) / root.values[static_cast<size_t>(j)];
    cplx zp{1.0, 0.0};
    for (int k = 0; k < g; ++k) {
      out.integral(k) += base * zp;
      zp *= z[static_cast<size_t>(j)];
    }
  }
  out.integral *= sf / std::sqrt(curve.leading_coefficient);

  const cplx mu_path = sf * root.values.front();
  const cplx mu_ref = reference_root(curve, P.z) /
                      std::sqrt(curve.leading_coefficient);
  const double sheet = branch_agreement(mu_path, mu_ref);
  if (static_cast<int>(sheet) != P.sheet) out.integral = -out.integral;
  return out;
}

// Point covering infinity on a curve with no branching there: route through
// Q = E + 50 * scale * direction and use w = 1/z beyond Q.
EndpointPiece infinite_point_piece(const SurfacePoint& P,
                                   const PeriodData& periods, int nc) {
  const Curve& curve = periods.curve;
  const int g = curve.genus;
  const double scale = std::max(curve.scale(), 1.0);

  int ie = 0;
  double best = -1.0;
  for (int i = 0; i < curve.finite_count(); ++i) {
    const double d =
        std::abs(curve.finite_points[static_cast<size_t>(i)] - periods.cuts.center);
    if (d > best) {
      best = d;
      ie = i;
    }
  }
  const cplx e = curve.finite_points[static_cast<size_t>(ie)];
  cplx dir = e - periods.cuts.center;
  dir /= std::abs(dir);
  const cplx q_pt = e + 50.0 * scale * dir;

  // piece 1: E -> Q in s = sqrt(z - E)
  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  const cplx sf = std::sqrt(q_pt - e);
  std::vector<cplx> z(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    const cplx s = sf * (0.5 * (rule.nodes(j) + 1.0));
    z[static_cast<size_t>(j)] = e + s * s;
  }
  const int excl[1] = {ie};
  SampledRoot root1 = continue_root(z, curve, excl);
  Eigen::RowVectorXcd piece1 = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const cplx base = rule.weights(j) / root1.values[static_cast<size_t>(j)];
    cplx zp{1.0, 0.0};
    for (int k = 0; k < g; ++k) {
      piece1(k) += base * zp;
      zp *= z[static_cast<size_t>(j)];
    }
  }
  piece1 *= sf;

  // piece 2: Q -> infinity in w = 1/z
  const cplx wq = 1.0 / q_pt;
  std::vector<cplx> w(static_cast<size_t>(nc) + 1);
  std::vector<cplx> radicand(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    w[static_cast<size_t>(j)] = wq * (0.5 * (rule.nodes(j) + 1.0));
    cplx prod{1.0, 0.0};
    for (const cplx& zi : curve.finite_points)
      prod *= 1.0 - zi * w[static_cast<size_t>(j)];
    radicand[static_cast<size_t>(j)] = prod;
  }
  SampledRoot root2 = continued_sqrt(radicand);
  Eigen::RowVectorXcd piece2 = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const cplx base = rule.weights(j) / root2.values[static_cast<size_t>(j)];
    cplx wp{1.0, 0.0};
    for (int k = g; k >= 1; --k) {
      // accumulate w^{g-k} for k = g down to 1
      piece2(k - 1) += base * wp;
      wp *= w[static_cast<size_t>(j)];
    }
  }
  piece2 *= wq * 0.5;

  // align the branch of piece 2 with piece 1 at the junction Q
  const cplx mu1 = sf * root1.values.front();
  const cplx mu2 = root2.values.front() / ipow(wq, g + 1);
  const double s2 = branch_agreement(mu2, mu1);
  piece2 *= s2;

  Eigen::RowVectorXcd total =
      (piece1 + piece2) / std::sqrt(curve.leading_coefficient);

  // sheet at infinity: sign of mu / z^{g+1} against +1
  const double sheet = branch_agreement(s2 * root2.values.back(), cplx{1.0, 0.0});
  if (static_cast<int>(sheet) != P.sheet) total = -total;

  EndpointPiece out;
  out.integral = std::move(total);
  out.anchor_entry = entry_of(periods.cuts, e, 1e-9 * scale);
  return out;
}

EndpointPiece endpoint_piece(const SurfacePoint& P, const PeriodData& periods,
                             int nc) {
  if (P.at_infinity) {
    if (periods.curve.branched_at_infinity) {
      EndpointPiece out;
      out.integral =
          Eigen::RowVectorXcd::Zero(periods.curve.genus);
      out.anchor_entry = 1;
      return out;
    }
    return infinite_point_piece(P, periods, nc);
  }
  return finite_point_piece(P, periods, nc);
}

}  // namespace

JacobianPoint reduce_to_fundamental(const Eigen::VectorXcd& v,
                                    const Eigen::MatrixXcd& riemann) {
  const int g = static_cast<int>(v.size());
  if (riemann.rows() != g || riemann.cols() != g)
    throw std::invalid_argument("dimension mismatch in lattice reduction");
  const Eigen::MatrixXd re_b = riemann.real();
  const Eigen::MatrixXd im_b = riemann.imag();

  // v = 2 pi i alpha + B beta with real alpha, beta: the real part fixes
  // beta, the imaginary part then fixes alpha.
  const Eigen::VectorXd beta = re_b.partialPivLu().solve(v.real());
  const Eigen::VectorXd alpha = (v.imag() - im_b * beta) / (2.0 * kPi);

  JacobianPoint out;
  out.raw = v;
  out.p.resize(g);
  out.q.resize(g);
  out.m.resize(g);
  out.n.resize(g);
  auto split = [](double x, double& frac, int& whole) {
    whole = static_cast<int>(std::floor(x + 0.5));
    frac = x - whole;
    if (frac <= -0.5 + 1e-12) {  // seam: map -1/2 to +1/2
      frac += 1.0;
      whole -= 1;
    }
  };
  for (int i = 0; i < g; ++i) {
    split(alpha(i), out.p(i), out.m(i));
    split(beta(i), out.q(i), out.n(i));
  }
  out.reduced = (2.0 * kPi * kImag) * out.p.cast<cplx>() +
                riemann * out.q.cast<cplx>();
  return out;
}

Parity characteristic_parity(const Eigen::VectorXd& p,
                             const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("characteristic vectors differ in length");
  for (int i = 0; i < p.size(); ++i) {
    if (std::abs(2.0 * p(i) - std::round(2.0 * p(i))) > 1e-8 ||
        std::abs(2.0 * q(i) - std::round(2.0 * q(i))) > 1e-8)
      throw std::invalid_argument("parity requires half-integer characteristics");
  }
  const double s = 4.0 * p.dot(q);
  const long long r = std::llround(s);
  return (((r % 2) + 2) % 2 == 0) ? Parity::kEven : Parity::kOdd;
}

Eigen::VectorXcd abel_between_branch_points(int entry_a, int entry_b,
                                            const PeriodData& periods) {
  const int g = periods.genus();
  const int len = periods.cuts.sequence_length();
  if (entry_a < 1 || entry_a > len || entry_b < 1 || entry_b > len)
    throw std::invalid_argument("branch-point entry out of range");
  Eigen::RowVectorXcd sum = Eigen::RowVectorXcd::Zero(g);
  const int lo = std::min(entry_a, entry_b), hi = std::max(entry_a, entry_b);
  for (int j = lo; j < hi; ++j) sum += 0.5 * periods.line_integrals.row(j - 1);
  if (entry_a > entry_b) sum = -sum;
  return periods.normalization().transpose() * sum.transpose();
}

JacobianPoint abel_map(const SurfacePoint& P, const SurfacePoint& P0,
                       const PeriodData& periods, int nc) {
  const EndpointPiece head = endpoint_piece(P, periods, nc);
  const EndpointPiece tail = endpoint_piece(P0, periods, nc);

  Eigen::RowVectorXcd chain =
      Eigen::RowVectorXcd::Zero(periods.genus());
  const int lo = std::min(tail.anchor_entry, head.anchor_entry);
  const int hi = std::max(tail.anchor_entry, head.anchor_entry);
  for (int j = lo; j < hi; ++j)
    chain += 0.5 * periods.line_integrals.row(j - 1);
  if (tail.anchor_entry > head.anchor_entry) chain = -chain;

  const Eigen::RowVectorXcd total_nu = head.integral - tail.integral + chain;
  const Eigen::VectorXcd v =
      periods.normalization().transpose() * total_nu.transpose();
  return reduce_to_fundamental(v, periods.riemann);
}

}  // namespace hyperell
