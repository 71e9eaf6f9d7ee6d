#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "hyperell/curve.hpp"
#include "hyperell/types.hpp"

namespace hyperell {

/// System of g+1 nonintersecting cuts between branch points, fixing the
/// homology basis: the cycle a_j encircles cut j once clockwise in the +
/// sheet, and the contours c_j linking successive cuts assemble the b-cycles.
///
/// The branch points are kept in homology order as a sequence of 2g+2
/// entries; entry 0 may be the point at infinity, in which case cut 0 runs
/// from infinity to the first finite point along the stored ray direction.
struct CutSystem {
  bool starts_at_infinity = false;
  std::vector<cplx> points;   // finite entries of the sequence, in order
  cplx center{0.0, 0.0};      // perturbed centroid used for the ordering
  cplx ray_direction{1.0, 0.0};  // unit direction of the infinite cut

  int sequence_length() const {
    return static_cast<int>(points.size()) + (starts_at_infinity ? 1 : 0);
  }
  int genus() const { return sequence_length() / 2 - 1; }
  int num_cuts() const { return genus() + 1; }
  int num_segments() const { return sequence_length() - 1; }

  /// Entries are indexed 1..2g+2; entry 1 may be infinite.
  bool entry_is_infinite(int i) const {
    return starts_at_infinity && i == 1;
  }
  cplx entry(int i) const {
    return points[static_cast<size_t>(i - 1 - (starts_at_infinity ? 1 : 0))];
  }

  /// Cut j (j = 0..g) joins entries 2j+1 and 2j+2; segment j (j = 1..2g+1)
  /// joins entries j and j+1.  Odd segments are the cuts themselves, even
  /// segments are the gaps linking successive cuts.
  std::pair<int, int> cut_entries(int j) const {
    return {2 * j + 1, 2 * j + 2};
  }
};

/// Orders the branch points by the argument of z - c around the perturbed
/// centroid c (ties broken by modulus) and pairs consecutive points into
/// cuts; for an odd number of points, infinity is prepended along the ray
/// with the argument of the first point.  Throws std::invalid_argument when
/// the resulting cuts intersect; such configurations must be entered as
/// explicit cut pairs.
CutSystem build_cut_system(const Curve& curve, std::uint64_t seed = kDefaultSeed);

/// One user-supplied cut; `from_infinity` is only allowed for the first cut,
/// whose finite endpoint is then `b`.
struct CutPair {
  bool from_infinity = false;
  cplx a{0.0, 0.0};
  cplx b{0.0, 0.0};
};

/// Builds the curve and the cut system from user-prescribed cut pairs taken
/// verbatim in the given order.  Validates distinctness and that no two cut
/// segments intersect.
std::pair<Curve, CutSystem> curve_from_cut_pairs(const std::vector<CutPair>& pairs,
                                                 std::uint64_t seed = kDefaultSeed);

/// Integer assembly matrices mapping the (2g+1) x g matrix of segment
/// integrals to the (g+1) x g a-period candidates (rows 2l+1) and to the
/// g x g b-period partial sums (rows 2, 4, ..., 2l).
Eigen::MatrixXi a_assembly(int genus);
Eigen::MatrixXi b_assembly(int genus);

/// True when the open segments (a1,b1) and (a2,b2) intersect or touch.
bool segments_intersect(cplx a1, cplx b1, cplx a2, cplx b2);

}  // namespace hyperell
