#include "hyperell/curve.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace hyperell {

namespace {

// Two inputs closer than 1e-14 times the largest pairwise distance count as
// the same point.
void require_distinct(const std::vector<cplx>& pts) {
  const int n = static_cast<int>(pts.size());
  double max_dist = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      max_dist = std::max(max_dist, std::abs(pts[i] - pts[j]));
  const double tol = 1e-14 * std::max(max_dist, 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= tol)
        throw std::invalid_argument(
            "repeated branch points: the curve must have simple zeros");
}

Curve make_curve(std::vector<cplx> pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 3)
    throw std::invalid_argument("need at least 3 finite branch points");
  require_distinct(pts);
  Curve c;
  c.finite_points = std::move(pts);
  c.branched_at_infinity = (n % 2 != 0);
  c.genus = genus_of(n);
  return c;
}

}  // namespace

double Curve::scale() const {
  double s = 0.0;
  for (size_t i = 0; i < finite_points.size(); ++i)
    for (size_t j = i + 1; j < finite_points.size(); ++j)
      s = std::max(s, std::abs(finite_points[i] - finite_points[j]));
  return s;
}

int genus_of(int n) {
  if (n < 3) throw std::invalid_argument("genus_of: need N >= 3");
  return (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
}

double separation_ratio(const std::vector<cplx>& pts) {
  if (pts.size() < 2)
    throw std::invalid_argument("separation_ratio: need >= 2 finite points");
  double max_d = 0.0, min_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::abs(pts[i] - pts[j]);
      max_d = std::max(max_d, d);
      min_d = std::min(min_d, d);
    }
  return max_d / min_d;
}

double separation_ratio(const Curve& curve) {
  return separation_ratio(curve.finite_points);
}

Curve curve_from_coefficients(const std::vector<cplx>& a) {
  if (a.size() < 4)
    throw std::invalid_argument("polynomial degree must be at least 3");
  const int degree = static_cast<int>(a.size()) - 1;
  const cplx lead = a.back();
  if (std::abs(lead) == 0.0)
    throw std::invalid_argument("leading coefficient a_N must be nonzero");

  // Companion matrix of the monic polynomial; its eigenvalues are the roots.
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -a[i] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("companion-matrix eigenvalue solve failed");

  std::vector<cplx> roots(degree);
  for (int i = 0; i < degree; ++i) roots[i] = solver.eigenvalues()(i);

  const double delta = separation_ratio(roots);
  if (delta >= 1e6)
    throw std::invalid_argument(
        "separation ratio >= 1e6: roots are unreliable in coefficient mode; "
        "provide the branch points or cut pairs instead");

  Curve c = make_curve(std::move(roots));
  c.leading_coefficient = lead;
  c.coefficients = a;
  return c;
}

Curve curve_from_branch_points(std::vector<cplx> points) {
  return make_curve(std::move(points));
}

}  // namespace hyperell
