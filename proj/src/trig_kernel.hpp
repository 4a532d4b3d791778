#pragma once

#include <cmath>
#include <numbers>

#include "nodalscope/spectrum.hpp"

namespace nodalscope::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Fractional part of k.x; shared by point evaluation and grid sampling so
/// both produce identical bits at grid nodes.
inline double mode_phase(const ModeVector& k, const Vec& x, int dim) {
  double t = 0.0;
  for (int d = 0; d < dim; ++d) t += k.k[d] * x[d];
  return t - std::floor(t);
}

inline long isqrt_ceil(long m) {
  long s = static_cast<long>(std::sqrt(static_cast<double>(m)));
  while (s * s < m) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= m) --s;
  return s;
}

}  // namespace nodalscope::detail
