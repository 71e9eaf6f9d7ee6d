#include "hyperell/periods.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

namespace hyperell {

namespace {

const cplx kImag{0.0, 1.0};

int find_branch_index(const Curve& curve, cplx z) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < curve.finite_count(); ++i) {
    const double d = std::abs(curve.finite_points[static_cast<size_t>(i)] - z);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (best < 0 || best_d > 1e-10 * std::max(curve.scale(), 1.0))
    throw std::invalid_argument("point is not a branch point of the curve");
  return best;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Raw path integrals int nu_k without the leading-coefficient factor and
// without the doubling of the I-convention; the overall sign is local.
struct PathIntegral {
  Eigen::RowVectorXcd row;   // entries k = 1..g
  std::vector<cplx> root;    // continued root samples (first node first)
};

// int_{za}^{zb} z^{k-1}/sqrt(p(z)) dz with p excluding the two endpoint
// factors, regularized by s = sin(pi t / 2).
PathIntegral raw_finite(const Curve& curve, cplx za, int ia, cplx zb, int ib,
                        int nc, bool check_proximity) {
  const int g = curve.genus;
  const cplx v = (za + zb) / 2.0, u = (zb - za) / 2.0;
  if (check_proximity) {
    for (int i = 0; i < curve.finite_count(); ++i) {
      if (i == ia || i == ib) continue;
      const cplx zi = curve.finite_points[static_cast<size_t>(i)];
      if (point_segment_distance(zi, za, zb) < 1e-13 * std::abs(u))
        throw std::invalid_argument(
            "a branch point lies on an integration segment; "
            "enter this curve through cut-pair input");
    }
  }
  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  std::vector<cplx> z(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j)
    z[static_cast<size_t>(j)] = v + u * std::sin(0.5 * kPi * rule.nodes(j));
  const int excl[2] = {ia, ib};
  SampledRoot root = continue_root(z, curve, excl);

  PathIntegral out;
  out.row = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const cplx base = rule.weights(j) / root.values[static_cast<size_t>(j)];
    cplx zp{1.0, 0.0};
    for (int k = 0; k < g; ++k) {
      out.row(k) += base * zp;
      zp *= z[static_cast<size_t>(j)];
    }
  }
  out.row *= kImag * (0.5 * kPi);
  out.root = std::move(root.values);
  return out;
}

// int_e^{zf} nu_k in the local coordinate s = sqrt(z - e) absorbing the
// branch-point factor at e; zf need not be a branch point.
PathIntegral raw_sqrt_coordinate(const Curve& curve, cplx e, int ie, cplx zf,
                                 int nc) {
  const int g = curve.genus;
  const cplx sf = std::sqrt(zf - e);
  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  std::vector<cplx> z(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    const cplx s = sf * (0.5 * (rule.nodes(j) + 1.0));
    z[static_cast<size_t>(j)] = e + s * s;
  }
  const int excl[1] = {ie};
  SampledRoot root = continue_root(z, curve, excl);

  PathIntegral out;
  out.row = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const cplx base = rule.weights(j) / root.values[static_cast<size_t>(j)];
    cplx zp{1.0, 0.0};
    for (int k = 0; k < g; ++k) {
      out.row(k) += base * zp;
      zp *= z[static_cast<size_t>(j)];
    }
  }
  out.row *= sf;
  out.root = std::move(root.values);
  return out;
}

// Half of a gap integral, from the cut endpoint ze towards the segment
// midpoint, in the coordinate z = (zfar+ze)/2 + ((ze-zfar)/2) cosh s that
// absorbs both factors of the adjacent cut (zfar, ze).  zother is the
// opposite endpoint of the gap segment.
PathIntegral raw_cosh_half(const Curve& curve, cplx zfar, int ifar, cplx ze,
                           int ie, cplx zother, int nc) {
  const int g = curve.genus;
  const cplx alpha = (zfar + ze) / 2.0, beta = (ze - zfar) / 2.0;
  const cplx smax = std::acosh((zother - zfar) / (ze - zfar));
  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  std::vector<cplx> z(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    const cplx s = smax * (0.5 * (rule.nodes(j) + 1.0));
    z[static_cast<size_t>(j)] = alpha + beta * std::cosh(s);
  }
  const int excl[2] = {ifar, ie};
  SampledRoot root = continue_root(z, curve, excl);

  PathIntegral out;
  out.row = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const cplx base = rule.weights(j) / root.values[static_cast<size_t>(j)];
    cplx zp{1.0, 0.0};
    for (int k = 0; k < g; ++k) {
      out.row(k) += base * zp;
      zp *= z[static_cast<size_t>(j)];
    }
  }
  out.row *= smax * 0.5;
  out.root = std::move(root.values);
  return out;
}

cplx ipow(cplx base, int n) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

// Moebius route for the cut to infinity: w = 1/(z - c) maps the ray onto the
// straight segment from w = 0 to the image of the first finite branch point;
// both endpoint factors of the transformed curve are absorbed as in the
// finite case.
PathIntegral raw_mobius(const Curve& curve, const CutSystem& cuts, int nc) {
  const int g = curve.genus;
  const cplx z1 = cuts.entry(2);
  const int i1 = find_branch_index(curve, z1);
  const double scale = std::max(curve.scale(), 1.0);

  cplx c = cuts.center;
  for (int attempt = 0; attempt < 32; ++attempt) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const cplx& zi : curve.finite_points) dmin = std::min(dmin, std::abs(c - zi));
    if (dmin > 1e-8 * scale) break;
    c = cuts.center + 0.05 * scale *
                          cplx{std::cos(0.7 + attempt), std::sin(0.7 + attempt)};
  }

  const cplx wb = 1.0 / (z1 - c);
  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  std::vector<cplx> w(static_cast<size_t>(nc) + 1);
  std::vector<cplx> radicand(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    const double s = std::sin(0.5 * kPi * rule.nodes(j));
    w[static_cast<size_t>(j)] = wb * (0.5 * (s + 1.0));
    cplx prod = -(z1 - c);
    for (int i = 0; i < curve.finite_count(); ++i) {
      if (i == i1) continue;
      prod *= 1.0 - w[static_cast<size_t>(j)] *
                        (curve.finite_points[static_cast<size_t>(i)] - c);
    }
    radicand[static_cast<size_t>(j)] = prod;
  }
  SampledRoot root = continued_sqrt(radicand);

  PathIntegral out;
  out.row = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const cplx wj = w[static_cast<size_t>(j)];
    const cplx base = rule.weights(j) / root.values[static_cast<size_t>(j)];
    for (int k = 1; k <= g; ++k)
      out.row(k - 1) += base * ipow(1.0 + wj * c, k - 1) * ipow(wj, g - k);
  }
  out.row *= kImag * (0.5 * kPi);
  out.root = std::move(root.values);
  return out;
}

// Tail piece of the 1/sqrt(z)-type route along the exact homology ray
// z = z1 + (r0/rho^2) d, integrated from rho = rho_lo up to rho = 1 (z from
// infinity, or the auxiliary matching point, down to R).
PathIntegral raw_ray_tail(const Curve& curve, cplx z1, int i1, cplx d,
                          double r0, double rho_lo, int nc) {
  const int g = curve.genus;
  const cplx rd = r0 * d;
  std::vector<cplx> ci;
  ci.reserve(static_cast<size_t>(curve.finite_count()) - 1);
  for (int i = 0; i < curve.finite_count(); ++i)
    if (i != i1)
      ci.push_back((z1 - curve.finite_points[static_cast<size_t>(i)]) / rd);

  const QuadratureRule& rule = clenshaw_curtis_rule(nc);
  std::vector<cplx> radicand(static_cast<size_t>(nc) + 1);
  std::vector<double> rho(static_cast<size_t>(nc) + 1);
  for (int j = 0; j <= nc; ++j) {
    rho[static_cast<size_t>(j)] =
        rho_lo + (1.0 - rho_lo) * 0.5 * (rule.nodes(j) + 1.0);
    const double r2 = rho[static_cast<size_t>(j)] * rho[static_cast<size_t>(j)];
    cplx prod{1.0, 0.0};
    for (const cplx& cc : ci) prod *= 1.0 + r2 * cc;
    radicand[static_cast<size_t>(j)] = prod;
  }
  SampledRoot root = continued_sqrt(radicand);

  PathIntegral out;
  out.row = Eigen::RowVectorXcd::Zero(g);
  for (int j = 0; j <= nc; ++j) {
    const double rj = rho[static_cast<size_t>(j)];
    const cplx base = rule.weights(j) / root.values[static_cast<size_t>(j)];
    for (int k = 1; k <= g; ++k)
      out.row(k - 1) +=
          base * ipow(z1 * rj * rj + rd, k - 1) * std::pow(rj, 2 * (g - k));
  }
  out.row *= std::sqrt(rd) / ipow(rd, g) * (1.0 - rho_lo);
  out.root = std::move(root.values);
  return out;
}

// +1 when a and b agree in sign as square-root branches, -1 otherwise.
double branch_agreement(cplx a, cplx b) {
  return (std::abs(a - b) <= std::abs(a + b)) ? 1.0 : -1.0;
}

double row_norm(const Eigen::RowVectorXcd& r) { return r.cwiseAbs().maxCoeff(); }

// Chooses rel in {+1,-1} so that combined = first + rel*second matches the
// low-accuracy direct value up to an overall sign, escalating the direct
// integral's resolution when the decision is ambiguous.
Eigen::RowVectorXcd combine_with_direct(
    const Eigen::RowVectorXcd& first, const Eigen::RowVectorXcd& second,
    const std::function<Eigen::RowVectorXcd(int)>& direct, int nc) {
  int aux = std::max(16, nc / 4);
  for (int attempt = 0; attempt < 4; ++attempt) {
    const Eigen::RowVectorXcd d = direct(std::min(aux, kMaxNc));
    double best[2];
    for (int r = 0; r < 2; ++r) {
      const Eigen::RowVectorXcd cand = first + (r == 0 ? 1.0 : -1.0) * second;
      best[r] = std::min(row_norm(cand - d), row_norm(cand + d));
    }
    const int winner = best[0] <= best[1] ? 0 : 1;
    const double scale = row_norm(d) + row_norm(first) + row_norm(second);
    if (best[winner] <= 0.5 * best[1 - winner] &&
        best[winner] <= 0.45 * scale)
      return first + (winner == 0 ? 1.0 : -1.0) * second;
    aux *= 4;
  }
  throw InsufficientResolution(
      "could not fix the relative sign of a split segment integral");
}

}  // namespace

Eigen::RowVectorXcd finite_segment_row(const Curve& curve, cplx za, cplx zb,
                                       int nc) {
  const int ia = find_branch_index(curve, za);
  const int ib = find_branch_index(curve, zb);
  PathIntegral raw = raw_finite(curve, za, ia, zb, ib, nc, true);
  return 2.0 * raw.row / std::sqrt(curve.leading_coefficient);
}

Eigen::RowVectorXcd infinite_segment_row(const Curve& curve,
                                         const CutSystem& cuts, int nc,
                                         InfiniteMethod method) {
  if (!curve.branched_at_infinity || !cuts.starts_at_infinity)
    throw std::invalid_argument("curve has no cut to infinity");
  if (method == InfiniteMethod::kMobius) {
    PathIntegral raw = raw_mobius(curve, cuts, nc);
    return 2.0 * raw.row / std::sqrt(curve.leading_coefficient);
  }

  // Local coordinates: split at R on the ray, s = sqrt(z - z1) below and the
  // 1/sqrt(z)-type ray coordinate beyond, with the relative sign fixed by a
  // low-accuracy integral up to a matching point far beyond R.
  const cplx z1 = cuts.entry(2);
  const int i1 = find_branch_index(curve, z1);
  const cplx d = cuts.ray_direction;
  const double target = std::max(1.0, 2.0 * std::abs(z1));
  const double b = (std::conj(z1) * d).real();
  const double r0 =
      -b + std::sqrt(std::max(b * b + target * target - std::norm(z1), 0.0));
  const cplx rpt = z1 + r0 * d;

  PathIntegral j1 = raw_sqrt_coordinate(curve, z1, i1, rpt, nc);
  PathIntegral j2 = raw_ray_tail(curve, z1, i1, d, r0, 0.0, nc);

  const double scale = std::max(curve.scale(), 1.0);
  const double rtilde = 50.0 * std::max(r0, scale);
  const double rho_lo = std::sqrt(r0 / rtilde);
  const cplx ztilde = z1 + rtilde * d;

  // The relative sign of the two pieces follows from a low-accuracy integral
  // up to ztilde: with the auxiliary branch aligned to j1 at z1 and the
  // matching tail piece aligned to j2 at rho = 1, the combination
  // j1 + r * tail must reproduce it for exactly one r.
  int aux = std::max(16, nc / 4);
  for (int attempt = 0; attempt < 4; ++attempt) {
    PathIntegral a = raw_sqrt_coordinate(curve, z1, i1, ztilde,
                                         std::min(aux, kMaxNc));
    const double sa = branch_agreement(a.root.back(), j1.root.back());
    PathIntegral t =
        raw_ray_tail(curve, z1, i1, d, r0, rho_lo, std::min(aux, kMaxNc));
    const double st = branch_agreement(t.root.front(), j2.root.front());
    const Eigen::RowVectorXcd target = sa * a.row;
    const double e_plus = row_norm(j1.row + st * t.row - target);
    const double e_minus = row_norm(j1.row - st * t.row - target);
    const double best = std::min(e_plus, e_minus);
    const double other = std::max(e_plus, e_minus);
    if (best <= 0.5 * other) {
      const double rel = (e_plus <= e_minus) ? 1.0 : -1.0;
      return 2.0 * (j1.row + rel * j2.row) /
             std::sqrt(curve.leading_coefficient);
    }
    aux *= 4;
  }
  throw InsufficientResolution(
      "could not fix the relative sign of the infinite segment integral");
}

Eigen::RowVectorXcd degenerate_segment_row(const Curve& curve,
                                           const CutSystem& cuts,
                                           int even_segment, int nc) {
  if (even_segment % 2 != 0 || even_segment < 2 ||
      even_segment > cuts.num_segments() - 1)
    throw std::invalid_argument("degenerate integrator applies to gap segments");
  const int j = even_segment;
  const cplx ze1 = cuts.entry(j), ze2 = cuts.entry(j + 1);
  const int ie1 = find_branch_index(curve, ze1);
  const int ie2 = find_branch_index(curve, ze2);
  const cplx mid = (ze1 + ze2) / 2.0;

  PathIntegral h1 =
      cuts.entry_is_infinite(j - 1)
          ? raw_sqrt_coordinate(curve, ze1, ie1, mid, nc)
          : raw_cosh_half(curve, cuts.entry(j - 1),
                          find_branch_index(curve, cuts.entry(j - 1)), ze1, ie1,
                          ze2, nc);
  PathIntegral h2 = raw_cosh_half(curve, cuts.entry(j + 2),
                                  find_branch_index(curve, cuts.entry(j + 2)),
                                  ze2, ie2, ze1, nc);

  auto direct = [&](int aux) {
    return Eigen::RowVectorXcd(
        raw_finite(curve, ze1, ie1, ze2, ie2, aux, false).row);
  };
  // h1 runs ze1 -> mid and h2 runs ze2 -> mid, so the branch-consistent
  // combination is h1 - h2; the direct integral resolves the ambiguity.
  const Eigen::RowVectorXcd combined =
      combine_with_direct(h1.row, -h2.row, direct, nc);
  return 2.0 * combined / std::sqrt(curve.leading_coefficient);
}

cplx segment_integral_finite(cplx za, cplx zb, const Curve& curve, int k,
                             int nc) {
  if (k < 1 || k > curve.genus)
    throw std::invalid_argument("differential index k out of range");
  return finite_segment_row(curve, za, zb, nc)(k - 1);
}

cplx segment_integral_infinite(const Curve& curve, const CutSystem& cuts,
                               int k, int nc, InfiniteMethod method) {
  if (k < 1 || k > curve.genus)
    throw std::invalid_argument("differential index k out of range");
  return infinite_segment_row(curve, cuts, nc, method)(k - 1);
}

cplx segment_integral_degenerate(const Curve& curve, const CutSystem& cuts,
                                 int even_segment, int k, int nc) {
  if (k < 1 || k > curve.genus)
    throw std::invalid_argument("differential index k out of range");
  return degenerate_segment_row(curve, cuts, even_segment, nc)(k - 1);
}

ASignResolution resolve_a_signs(const Eigen::MatrixXcd& a_full,
                                double tol_sign) {
  const int g = static_cast<int>(a_full.cols());
  if (a_full.rows() != g + 1)
    throw std::invalid_argument("a_full must be (g+1) x g");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a_full, Eigen::ComputeFullU);
  if (g >= 1 && svd.singularValues()(g - 1) <=
                    1e-10 * std::max(svd.singularValues()(0), 1e-300))
    throw InsufficientResolution(
        "a-period candidates are nearly rank deficient");

  Eigen::VectorXcd null_vec = svd.matrixU().col(g);
  int imax = 0;
  for (int i = 1; i <= g; ++i)
    if (std::abs(null_vec(i)) > std::abs(null_vec(imax))) imax = i;
  null_vec /= null_vec(imax);

  ASignResolution out;
  out.signs.resize(g + 1);
  for (int i = 0; i <= g; ++i) {
    if (std::abs(std::abs(null_vec(i).real()) - 1.0) > tol_sign ||
        std::abs(null_vec(i).imag()) > tol_sign)
      throw InsufficientResolution(
          "a-period null vector is not a sign vector; "
          "rerun with more collocation points");
    out.signs(i) = null_vec(i).real() > 0.0 ? 1.0 : -1.0;
  }
  out.signed_full = a_full;
  for (int i = 0; i <= g; ++i) out.signed_full.row(i) *= out.signs(i);
  out.a_periods = out.signed_full.bottomRows(g);
  return out;
}

Eigen::MatrixXcd riemann_matrix(const Eigen::MatrixXcd& a_periods,
                                const Eigen::MatrixXcd& b_periods,
                                std::vector<std::string>* warnings) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a_periods);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 ||
      sv(0) / sv(sv.size() - 1) > 1e14)
    throw std::invalid_argument("a-period matrix is numerically singular");
  if (warnings && sv(0) / sv(sv.size() - 1) > 1e12)
    warnings->push_back(
        "a-period matrix poorly conditioned; Riemann-matrix accuracy is "
        "limited");
  return 2.0 * kPi * kImag * b_periods * a_periods.inverse();
}

bool negative_definite_real_part(const Eigen::MatrixXcd& riemann) {
  const Eigen::MatrixXd re = riemann.real();
  const Eigen::MatrixXd sym = 0.5 * (re + re.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const double norm = sym.cwiseAbs().maxCoeff();
  if (norm == 0.0) return false;
  return es.eigenvalues().maxCoeff() < -1e-14 * norm;
}

BSignResolution resolve_b_signs(const Eigen::MatrixXcd& a_periods,
                                const Eigen::MatrixXcd& gap_rows,
                                double tol_sign,
                                std::vector<std::string>* warnings) {
  const int g = static_cast<int>(a_periods.rows());
  if (gap_rows.rows() != g || gap_rows.cols() != g)
    throw std::invalid_argument("gap_rows must be g x g");

  // B(eps)_{lk} = -sum_{i<=l} eps_i * gap_rows(i,k); the Riemann matrix is
  // linear in the eps_i, so the first-off-diagonal symmetry conditions give
  // g-1 homogeneous linear equations for the g signs.
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a_periods);
  const Eigen::MatrixXcd a_inv = lu.inverse();
  std::vector<Eigen::MatrixXcd> contrib(static_cast<size_t>(g));
  for (int i = 0; i < g; ++i) {
    Eigen::MatrixXcd bi = Eigen::MatrixXcd::Zero(g, g);
    for (int l = i; l < g; ++l) bi.row(l) = -gap_rows.row(i);
    contrib[static_cast<size_t>(i)] = 2.0 * kPi * kImag * bi * a_inv;
  }

  Eigen::VectorXd eps = Eigen::VectorXd::Ones(g);
  if (g > 1) {
    Eigen::MatrixXd m(g - 1, g);
    for (int l = 0; l < g - 1; ++l)
      for (int i = 0; i < g; ++i)
        m(l, i) = (contrib[static_cast<size_t>(i)](l, l + 1) -
                   contrib[static_cast<size_t>(i)](l + 1, l))
                      .real();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // The kernel is 1-dimensional only when all g-1 singular values are of
    // the natural size of the condition coefficients; otherwise (e.g. when
    // the off-diagonal of Re B vanishes identically) the conditions cannot
    // decide and the signs are picked by minimizing the skew part directly.
    double mscale = 1e-300;
    for (int i = 0; i < g; ++i)
      mscale = std::max(mscale,
                        contrib[static_cast<size_t>(i)].cwiseAbs().maxCoeff());
    const bool kernel_ambiguous = sv(g - 2) <= 1e-8 * mscale;
    if (!kernel_ambiguous) {
      Eigen::VectorXd null_vec = svd.matrixV().col(g - 1);
      int imax = 0;
      for (int i = 1; i < g; ++i)
        if (std::abs(null_vec(i)) > std::abs(null_vec(imax))) imax = i;
      null_vec /= null_vec(imax);
      bool sign_like = true;
      for (int i = 0; i < g; ++i)
        if (std::abs(std::abs(null_vec(i)) - 1.0) > tol_sign) sign_like = false;
      if (!sign_like)
        throw InsufficientResolution(
            "b-period sign vector not resolved; rerun with more collocation "
            "points");
      for (int i = 0; i < g; ++i) eps(i) = null_vec(i) > 0.0 ? 1.0 : -1.0;
    } else {
      // The symmetry conditions do not determine the signs (the off-diagonal
      // of Re B vanishes identically, e.g. for product-like curves); pick
      // the sign pattern with the smallest skew part directly.
      double best = std::numeric_limits<double>::infinity();
      for (int mask = 0; mask < (1 << (g - 1)); ++mask) {
        Eigen::VectorXd cand = Eigen::VectorXd::Ones(g);
        for (int i = 1; i < g; ++i)
          if (mask & (1 << (i - 1))) cand(i) = -1.0;
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(g, g);
        for (int i = 0; i < g; ++i) r += cand(i) * contrib[static_cast<size_t>(i)];
        const double skew =
            (r - r.transpose()).real().cwiseAbs().maxCoeff();
        if (skew < best) {
          best = skew;
          eps = cand;
        }
      }
    }
  }

  BSignResolution out;
  out.signs = eps;
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(g, g);
  for (int l = 0; l < g; ++l)
    for (int i = 0; i <= l; ++i) b.row(l) -= eps(i) * gap_rows.row(i);
  Eigen::MatrixXcd riemann = riemann_matrix(a_periods, b, warnings);
  if (!negative_definite_real_part(riemann)) {
    out.signs = -out.signs;
    b = -b;
    riemann = -riemann;
    if (!negative_definite_real_part(riemann))
      throw std::runtime_error(
          "no overall sign makes Re(B) negative definite");
  }
  out.b_periods = std::move(b);
  out.riemann = std::move(riemann);
  return out;
}

double consistency_error(const Eigen::MatrixXcd& signed_a_full,
                         const Eigen::MatrixXcd& riemann) {
  const double col_sum =
      signed_a_full.colwise().sum().cwiseAbs().maxCoeff();
  const double skew =
      (riemann - riemann.transpose()).real().cwiseAbs().maxCoeff();
  return std::max(col_sum, skew);
}

Eigen::MatrixXcd PeriodData::normalization() const {
  return 2.0 * kPi * kImag *
         Eigen::MatrixXcd(a_periods.partialPivLu().inverse());
}

namespace {

PeriodData attempt_periods(const Curve& curve, const CutSystem& cuts, int nc,
                           const PeriodOptions& opts,
                           std::vector<std::string> warnings) {
  const int g = cuts.genus();
  Eigen::MatrixXcd integrals(2 * g + 1, g);
  for (int seg = 1; seg <= 2 * g + 1; ++seg) {
    if (seg % 2 == 1) {
      if (cuts.entry_is_infinite(seg)) {
        Eigen::RowVectorXcd row =
            infinite_segment_row(curve, cuts, nc, InfiniteMethod::kMobius);
        if (opts.verify_infinite) {
          const Eigen::RowVectorXcd alt = infinite_segment_row(
              curve, cuts, nc, InfiniteMethod::kLocalCoordinate);
          const double diff =
              std::min(row_norm(row - alt), row_norm(row + alt));
          if (diff > 1e-8 * std::max(1.0, row_norm(row)))
            throw InsufficientResolution(
                "infinite-segment methods disagree beyond 1e-8");
        }
        integrals.row(seg - 1) = row;
      } else {
        integrals.row(seg - 1) = finite_segment_row(
            curve, cuts.entry(seg), cuts.entry(seg + 1), nc);
      }
    } else {
      const double seg_len = std::abs(cuts.entry(seg + 1) - cuts.entry(seg));
      double adjacent = std::numeric_limits<double>::infinity();
      if (!cuts.entry_is_infinite(seg - 1))
        adjacent = std::abs(cuts.entry(seg) - cuts.entry(seg - 1));
      adjacent = std::min(adjacent,
                          std::abs(cuts.entry(seg + 2) - cuts.entry(seg + 1)));
      if (adjacent < opts.degenerate_threshold * seg_len)
        integrals.row(seg - 1) = degenerate_segment_row(curve, cuts, seg, nc);
      else
        integrals.row(seg - 1) = finite_segment_row(
            curve, cuts.entry(seg), cuts.entry(seg + 1), nc);
    }
  }

  Eigen::MatrixXcd a_full(g + 1, g);
  for (int l = 0; l <= g; ++l) a_full.row(l) = integrals.row(2 * l);
  ASignResolution ares = resolve_a_signs(a_full);

  Eigen::MatrixXcd gap(g, g);
  for (int i = 1; i <= g; ++i) gap.row(i - 1) = integrals.row(2 * i - 1);
  BSignResolution bres =
      resolve_b_signs(ares.a_periods, gap, 1e-6, &warnings);

  PeriodData data;
  data.curve = curve;
  data.cuts = cuts;
  data.line_integrals = std::move(integrals);
  for (int l = 0; l <= g; ++l) data.line_integrals.row(2 * l) *= ares.signs(l);
  for (int i = 1; i <= g; ++i)
    data.line_integrals.row(2 * i - 1) *= bres.signs(i - 1);
  data.a_full = std::move(ares.signed_full);
  data.a_periods = std::move(ares.a_periods);
  data.b_periods = std::move(bres.b_periods);
  data.riemann = std::move(bres.riemann);
  data.a_signs = std::move(ares.signs);
  data.b_signs = std::move(bres.signs);
  data.err = consistency_error(data.a_full, data.riemann);
  data.nc_used = nc;
  data.warnings = std::move(warnings);
  return data;
}

}  // namespace

PeriodData compute_periods(const Curve& curve, const CutSystem& cuts,
                           const PeriodOptions& opts) {
  if (curve.genus < 1)
    throw std::invalid_argument("period computation needs genus >= 1");
  if (cuts.genus() != curve.genus)
    throw std::invalid_argument("cut system does not match the curve");
  if (opts.nc < 4 || opts.nc > kMaxNc)
    throw std::invalid_argument("N_c must lie in [4, 4096]");

  std::vector<std::string> warnings;
  {
    const double cluster_tol = 1e-6 * std::max(curve.scale(), 1e-300);
    for (int i = 0; i < curve.finite_count(); ++i) {
      int close = 0;
      for (int j = 0; j < curve.finite_count(); ++j)
        if (j != i && std::abs(curve.finite_points[static_cast<size_t>(i)] -
                               curve.finite_points[static_cast<size_t>(j)]) <
                          cluster_tol)
          ++close;
      if (close >= 2) {
        warnings.push_back(
            "more than two branch points nearly coalesce; the split "
            "integrator can only partially compensate");
        break;
      }
    }
  }

  int nc = opts.nc;
  while (true) {
    bool can_double = opts.auto_double && 2 * nc <= opts.nc_max;
    try {
      PeriodData data = attempt_periods(curve, cuts, nc, opts, warnings);
      if (data.err > opts.err_target) {
        if (can_double) {
          nc *= 2;
          continue;
        }
        data.warnings.push_back("consistency error above target at maximal N_c");
      }
      return data;
    } catch (const InsufficientResolution&) {
      if (!can_double) throw;
      nc *= 2;
    }
  }
}

}  // namespace hyperell
