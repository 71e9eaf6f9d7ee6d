#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperell {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

/// Thrown when a computation detects that the current number of collocation
/// points cannot resolve the problem; callers may retry with a larger N_c.
class InsufficientResolution : public std::runtime_error {
 public:
  explicit InsufficientResolution(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace hyperell
