#include "hyperell/homology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hyperell {

namespace {

double cross(cplx o, cplx a, cplx b) {
  const cplx u = a - o, v = b - o;
  return u.real() * v.imag() - u.imag() * v.real();
}

bool on_segment_collinear(cplx a, cplx b, cplx p) {
  return std::min(a.real(), b.real()) - 1e-15 <= p.real() &&
         p.real() <= std::max(a.real(), b.real()) + 1e-15 &&
         std::min(a.imag(), b.imag()) - 1e-15 <= p.imag() &&
         p.imag() <= std::max(a.imag(), b.imag()) + 1e-15;
}

}  // namespace

bool segments_intersect(cplx a1, cplx b1, cplx a2, cplx b2) {
  const double scale =
      std::max({std::abs(b1 - a1), std::abs(b2 - a2), 1e-300});
  const double eps = 1e-14 * scale * scale;
  const double d1 = cross(a2, b2, a1);
  const double d2 = cross(a2, b2, b1);
  const double d3 = cross(a1, b1, a2);
  const double d4 = cross(a1, b1, b2);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps)))
    return true;
  // Touching or (near-)collinear contact counts as an intersection.
  if (std::abs(d1) <= eps && on_segment_collinear(a2, b2, a1)) return true;
  if (std::abs(d2) <= eps && on_segment_collinear(a2, b2, b1)) return true;
  if (std::abs(d3) <= eps && on_segment_collinear(a1, b1, a2)) return true;
  if (std::abs(d4) <= eps && on_segment_collinear(a1, b1, b2)) return true;
  return false;
}

namespace {

cplx perturbed_center(const std::vector<cplx>& pts, std::uint64_t seed) {
  cplx mean = std::accumulate(pts.begin(), pts.end(), cplx{0.0, 0.0});
  mean /= static_cast<double>(pts.size());
  double scale = 0.0;
  for (const cplx& z : pts) scale = std::max(scale, std::abs(z - mean));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const double phi = angle(rng);
  return mean + 1e-14 * scale * cplx{std::cos(phi), std::sin(phi)};
}

// Cut endpoints with the infinite cut replaced by a long finite proxy
// segment along its ray; no finite cut can lie beyond the bounding radius.
std::vector<std::pair<cplx, cplx>> cut_proxies(const CutSystem& cs) {
  std::vector<std::pair<cplx, cplx>> cuts;
  double radius = 0.0;
  for (const cplx& z : cs.points)
    radius = std::max(radius, std::abs(z - cs.center));
  for (int j = 0; j < cs.num_cuts(); ++j) {
    auto [i1, i2] = cs.cut_entries(j);
    if (cs.entry_is_infinite(i1)) {
      const cplx start = cs.entry(i2);
      cuts.emplace_back(start, start + 10.0 * radius * cs.ray_direction);
    } else {
      cuts.emplace_back(cs.entry(i1), cs.entry(i2));
    }
  }
  return cuts;
}

void check_cut_intersections(const CutSystem& cs, const char* advice) {
  const auto cuts = cut_proxies(cs);
  for (size_t i = 0; i < cuts.size(); ++i)
    for (size_t j = i + 1; j < cuts.size(); ++j)
      if (segments_intersect(cuts[i].first, cuts[i].second, cuts[j].first,
                             cuts[j].second))
        throw std::invalid_argument(std::string("cut segments intersect; ") +
                                    advice);
}

}  // namespace

CutSystem build_cut_system(const Curve& curve, std::uint64_t seed) {
  const std::vector<cplx>& pts = curve.finite_points;
  if (separation_ratio(pts) >= 1e14)
    throw std::invalid_argument(
        "branch points too close (separation ratio >= 1e14)");

  CutSystem cs;
  cs.center = perturbed_center(pts, seed);
  cs.points = pts;
  std::sort(cs.points.begin(), cs.points.end(),
            [&cs](const cplx& a, const cplx& b) {
              const double fa = std::arg(a - cs.center);
              const double fb = std::arg(b - cs.center);
              if (fa != fb) return fa < fb;
              return std::abs(a - cs.center) < std::abs(b - cs.center);
            });
  cs.starts_at_infinity = (pts.size() % 2 != 0);
  if (cs.starts_at_infinity) {
    const cplx dir = cs.points.front() - cs.center;
    cs.ray_direction = dir / std::abs(dir);
  }
  check_cut_intersections(cs, "enter this curve through cut-pair input");
  return cs;
}

std::pair<Curve, CutSystem> curve_from_cut_pairs(const std::vector<CutPair>& pairs,
                                                 std::uint64_t seed) {
  if (pairs.size() < 2)
    throw std::invalid_argument("need at least 2 cut pairs (genus >= 1)");
  std::vector<cplx> sequence;
  bool has_infinity = false;
  for (size_t j = 0; j < pairs.size(); ++j) {
    if (pairs[j].from_infinity) {
      if (j != 0)
        throw std::invalid_argument(
            "infinity is only valid as the first endpoint of the first cut");
      has_infinity = true;
    } else {
      sequence.push_back(pairs[j].a);
    }
    sequence.push_back(pairs[j].b);
  }

  Curve curve = curve_from_branch_points(sequence);
  if (curve.branched_at_infinity != has_infinity)
    throw std::invalid_argument("cut pairs inconsistent with branching at infinity");

  CutSystem cs;
  cs.starts_at_infinity = has_infinity;
  cs.points = sequence;
  cs.center = perturbed_center(sequence, seed);
  if (has_infinity) {
    const cplx dir = sequence.front() - cs.center;
    cs.ray_direction = dir / std::abs(dir);
  }
  check_cut_intersections(cs, "choose nonintersecting cut pairs");
  return {std::move(curve), std::move(cs)};
}

Eigen::MatrixXi a_assembly(int genus) {
  if (genus < 1) throw std::invalid_argument("assembly matrices need g >= 1");
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(genus + 1, 2 * genus + 1);
  for (int l = 0; l <= genus; ++l) m(l, 2 * l) = 1;
  return m;
}

Eigen::MatrixXi b_assembly(int genus) {
  if (genus < 1) throw std::invalid_argument("assembly matrices need g >= 1");
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(genus, 2 * genus + 1);
  for (int l = 0; l < genus; ++l)
    for (int i = 0; i <= l; ++i) m(l, 2 * i + 1) = 1;
  return m;
}

}  // namespace hyperell
