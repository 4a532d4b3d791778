#pragma once

#include <cstddef>
#include <functional>

#include "nodalscope/fields.hpp"

namespace nodalscope::detail {

/// Closed region of a sup query; `whole` ignores the radii and scans the torus.
struct Region {
  Vec center{};
  double r_out = 0.0;
  double r_in = 0.0;
  bool whole = false;
};

struct ScanObjective {
  /// Objective at a sample-grid node, offset = node - center (unwrapped).
  std::function<double(std::size_t node, const Vec& offset)> node_value;
  /// Exact objective at y = center + offset; fills grad (w.r.t. y) when non-null.
  std::function<double(const Vec& y, const Vec& offset, Vec* grad)> eval;
};

/// Grid or local-lattice scan of the region, then projected ascent from the
/// best local maxima and boundary samples.
SupResult scan_sup(const Region& region, const ScanObjective& obj, int dim, int grid_resolution,
                   const ProbeOptions& options, double deficit);

}  // namespace nodalscope::detail
