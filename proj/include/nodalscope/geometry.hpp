#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nodalscope {

/// Coordinates in R^n (n <= 3); unused trailing entries are zero.
using Vec = std::array<double, 3>;

/// The unit flat torus R^n / Z^n, n in {2, 3}.
class TorusModel {
 public:
  explicit TorusModel(int dim = 2);

  int dim() const { return dim_; }
  static constexpr double volume() { return 1.0; }
  static constexpr double injectivity_radius() { return 0.5; }

  friend bool operator==(const TorusModel&, const TorusModel&) = default;

 private:
  int dim_;
};

/// A point of the torus; coordinates are always stored reduced to [0, 1).
class Point {
 public:
  Point() = default;
  Point(double x, double y);
  Point(double x, double y, double z);
  Point(std::span<const double> coords);
  Point(const Vec& v, int dim);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const Vec& vec() const { return c_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Vec c_{};
  int dim_ = 2;
};

/// Reduce a coordinate to [0, 1).
double reduce_unit(double v);

/// Signed representative of a - b in [-1/2, 1/2).
double wrapped_delta(double a, double b);

double geodesic_distance(const Point& a, const Point& b, const TorusModel& model);

/// Volume of an embedded geodesic ball; throws EmbeddedBallError for r > 1/2.
double ball_volume(double r, const TorusModel& model);

/// Volume of the Euclidean unit ball in dimension n (1, 2 or 3).
double unit_ball_volume(int n);

/// Regular-grid cover of the torus by balls of radius r.
struct CoverSet {
  double radius = 0.0;
  int per_axis = 0;  // grid points per axis; spacing 1/per_axis
  std::vector<Point> centers;
  int overlap_bound = 0;  // max number of doubled balls B_{2r} over a probe grid
};

/// Per-axis grid count used by generate_cover for radius r.
///
/// For r in (1/8, 1/4] this is ceil(sqrt(n)/r). Smaller radii reuse the count of
/// the dyadic ancestor r * 2^j in (1/8, 1/4], multiplied by 2^j, so halving r
/// exactly doubles the grid and the cover geometry is self-similar.
int cover_per_axis(double r, int n);

/// Throws RangeError unless 0 < r <= 1/4.
CoverSet generate_cover(double r, const TorusModel& model, int probe_resolution = 512);

/// Max over a probe_resolution^n grid of the number of balls B_{2r}(c_i)
/// containing the probe.
int overlap_multiplicity(const CoverSet& cover, const TorusModel& model,
                         int probe_resolution = 512);

/// The constant (2 sqrt n)^n bounding card(centers) * r^n.
double cover_cardinality_constant(int n);

}  // namespace nodalscope
