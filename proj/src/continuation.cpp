#include "hyperell/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace hyperell {

SampledRoot continued_sqrt(std::span<const cplx> radicand_samples) {
  SampledRoot out;
  const size_t n = radicand_samples.size();
  std::vector<cplx> raw(n);
  for (size_t j = 0; j < n; ++j) raw[j] = std::sqrt(radicand_samples[j]);

  // Flip detection is invariant under a common sign of both samples, so it
  // can run on the raw principal values; exact ties count as no flip.
  for (size_t j = 1; j < n; ++j)
    if (std::abs(raw[j] - raw[j - 1]) > std::abs(raw[j] + raw[j - 1]))
      out.flip_indices.push_back(static_cast<int>(j));

  out.values = std::move(raw);
  double sign = 1.0;
  size_t next_flip = 0;
  for (size_t j = 0; j < n; ++j) {
    if (next_flip < out.flip_indices.size() &&
        static_cast<size_t>(out.flip_indices[next_flip]) == j) {
      sign = -sign;
      ++next_flip;
    }
    out.values[j] *= sign;
  }

  for (size_t j = 1; j < n; ++j)
    if (std::abs(out.values[j] - out.values[j - 1]) >
        std::abs(out.values[j] + out.values[j - 1]))
      throw InsufficientResolution(
          "square-root continuation still branched after sign correction; "
          "increase the number of collocation points");
  return out;
}

SampledRoot continue_root(std::span<const cplx> path, const Curve& curve,
                          std::span<const int> excluded) {
  std::vector<bool> skip(curve.finite_points.size(), false);
  for (int i : excluded) skip[static_cast<size_t>(i)] = true;

  const double scale = std::max(curve.scale(), 1e-300);
  std::vector<cplx> radicand(path.size());
  for (size_t j = 0; j < path.size(); ++j) {
    cplx prod{1.0, 0.0};
    for (size_t i = 0; i < curve.finite_points.size(); ++i) {
      if (skip[i]) continue;
      const cplx factor = path[j] - curve.finite_points[i];
      if (std::abs(factor) < 1e-15 * scale)
        throw std::invalid_argument(
            "contour sample coincides with a branch point");
      prod *= factor;
    }
    radicand[j] = prod;
  }
  SampledRoot out = continued_sqrt(radicand);
  out.samples.assign(path.begin(), path.end());
  return out;
}

}  // namespace hyperell
