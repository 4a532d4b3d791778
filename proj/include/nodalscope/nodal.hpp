#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nodalscope/fields.hpp"
#include "nodalscope/geometry.hpp"
#include "nodalscope/spectrum.hpp"

namespace nodalscope {

/// Segment of the contour with unwrapped endpoints (b may leave [0,1)^2 by
/// one cell); length is the Euclidean length, i.e. the torus length.
struct NodalSegment {
  Vec a{};
  Vec b{};
};

/// Polyline approximation of {psi = 0} on the 2-torus.
struct NodalSet {
  std::vector<NodalSegment> segments;
  /// Stitched chains of vertices, each vertex reduced mod 1.
  std::vector<std::vector<Vec>> polylines;
  std::vector<bool> closed;
  int resolution = 0;
  double length = 0.0;
  /// |L(N) - L(N/2)| / L(N), or 0 when N/2 is below the sampling bound.
  double convergence_estimate = 0.0;
  /// Grid nodes that evaluated to zero and were nudged to +1e-12.
  int perturbed_nodes = 0;
};

struct SingularPoint {
  Point location;
  int vanishing_order = 2;
  double residual = 0.0;  ///< max(|psi|, |grad psi|) at the refined point
};

struct VanishingOrder {
  int order = 0;
  double slope = 0.0;  ///< least-squares slope of log sup_{B_d}|psi|^2 vs log d
  bool at_zero = true;  ///< false when x is not a zero: precondition violated
};

struct SingularBallCounts {
  double radius = 0.0;
  std::vector<int> counts;  ///< sum of (nu - 1) per center
  int max_count = 0;
};

/// Minimal resolution for extract_nodal: four times the sampling bound.
int nodal_resolution_floor(long m);

/// Marching squares on an N x N periodic grid. Requires N >= nodal_resolution_floor(m).
NodalSet extract_nodal(const EigenfunctionSpec& spec, int resolution);
/// Same for a general polynomial (no floor check beyond sampling).
NodalSet extract_nodal(const TrigPolynomial& field, int resolution);

double nodal_length(const NodalSet& ns);

/// Max over centers of the torus distance to the nearest segment.
double max_distance_to_nodal(const NodalSet& ns, std::span<const Point> centers);

/// Newton-refined points with psi = |grad psi| = 0, deduplicated within one cell.
std::vector<SingularPoint> find_singular_points(const EigenfunctionSpec& spec, int resolution);

/// Order of vanishing from the slope of log sup_{B_d}|psi|^2 over 7 dyadic
/// radii in [delta_max/64, delta_max]. Throws AmbiguousOrderError when slope/2
/// lies within 1/4 of a half-integer.
VanishingOrder vanishing_order(const BallProbe& probe, const Point& x, double delta_max = 0.02);
VanishingOrder vanishing_order(const EigenfunctionSpec& spec, const Point& x,
                               double delta_max = 0.02);

/// Sum of (nu - 1) over singular points within sqrt(r) lambda^{-1/4} of each
/// center (or radius_override). Requires r >= lambda^{-1/2}.
SingularBallCounts count_singular_in_balls(std::span<const SingularPoint> points, double r,
                                           double lambda, std::span<const Point> centers,
                                           std::optional<double> radius_override = std::nullopt);

}  // namespace nodalscope
