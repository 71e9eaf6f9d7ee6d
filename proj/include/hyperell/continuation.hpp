#pragma once

#include <span>
#include <vector>

#include "hyperell/curve.hpp"
#include "hyperell/types.hpp"

namespace hyperell {

/// Square root of a polynomial product sampled along a contour, with the
/// spurious branch flips of the principal root removed.
struct SampledRoot {
  std::vector<cplx> samples;       // contour points z_j
  std::vector<cplx> values;        // analytically continued root values
  std::vector<int> flip_indices;   // first index of each detected sign flip
};

/// Removes spurious sign changes from principal-branch square-root samples:
/// a flip is detected between j and j+1 when |v_{j+1}-v_j| > |v_{j+1}+v_j|,
/// and the sign of every following sample is toggled.  The run before the
/// first flip keeps the principal sign; exact ties count as no flip.
/// Throws InsufficientResolution if the corrected sequence still jumps.
SampledRoot continued_sqrt(std::span<const cplx> radicand_samples);

/// Continuation of the root of prod_{i not excluded} (z - z_i) along the
/// given contour samples.  `excluded` lists indices into
/// curve.finite_points whose factors are absorbed into a local coordinate by
/// the caller.  Throws if a sample coincides with a branch point.
SampledRoot continue_root(std::span<const cplx> path, const Curve& curve,
                          std::span<const int> excluded = {});

}  // namespace hyperell
