#pragma once

#include <functional>
#include <vector>

#include "nodalscope/geometry.hpp"
#include "nodalscope/spectrum.hpp"

namespace nodalscope {

/// Exact nodal samples psi(i h) on an N^n grid, h = 1/N.
struct SampledField {
  int dim = 2;
  int resolution = 0;
  std::vector<double> values;
  /// dim entries per node when requested, node-major.
  std::vector<double> gradient;

  double spacing() const { return 1.0 / resolution; }
  std::size_t node_count() const { return values.size(); }
  /// Flat index of node (i, j[, l]); indices are reduced mod N.
  std::size_t index(int i, int j, int l = 0) const;
};

/// Throws ResolutionError when N < nyquist_resolution(m).
SampledField sample(const EigenfunctionSpec& spec, int resolution, bool with_gradient = false);
/// Sampling of a general polynomial; cutoff is 2 ceil(max|k|) + 2.
SampledField sample(const TrigPolynomial& field, int resolution, bool with_gradient = false);

/// Quantity whose sup over a region is requested.
enum class Channel {
  PsiSq,   ///< |psi|^2
  Q,       ///< |grad psi|^2 + (lambda/2) |psi|^2
  GradSq,  ///< |grad psi|^2
};

/// Result of a sup scan: refined maximum and its location.
struct SupResult {
  double value = 0.0;
  Vec location{};
  /// Relative second-order deficit bound of the scan lattice; maxima whose
  /// basin was not refined can exceed the returned value by at most this factor.
  double scan_deficit = 0.0;
};

struct BallStat {
  Point center;
  double radius = 0.0;
  double sup_sq = 0.0;
  double mass = 0.0;
  double error_bound = 0.0;
};

struct ProbeOptions {
  /// Relative stopping tolerance of the local refinement.
  double tol = 1e-3;
  /// Scan lattice resolution in points per wavelength 1/max|k|.
  double points_per_wavelength = 12.0;
  /// Number of candidate basins refined per query.
  int max_candidates = 12;
};

/// Ball queries against one fixed field.
///
/// Holds a precomputed sample grid of psi and q used by the sup scans. All
/// query methods are const and may be called concurrently.
class BallProbe {
 public:
  BallProbe(const EigenfunctionSpec& spec, ProbeOptions options = {});
  BallProbe(TrigPolynomial field, double lambda, ProbeOptions options = {});

  const TrigPolynomial& field() const { return field_; }
  double lambda() const { return lambda_; }
  int dim() const { return field_.dim(); }
  const ProbeOptions& options() const { return options_; }
  int grid_resolution() const { return grid_.resolution; }

  double channel_value(Channel ch, const Vec& x) const;

  /// sup of the channel over the closed annulus r_in <= d(y, center) <= r_out
  /// (a ball when r_in = 0). Requires 0 < r_out <= 1/2.
  SupResult sup(Channel ch, const Vec& center, double r_out, double r_in = 0.0) const;

  /// sup of the channel over the whole torus.
  SupResult global_sup(Channel ch) const;

  /// Exact integral of |psi|^2 over B_r(center), 0 < r <= 1/2.
  double mass(const Vec& center, double r) const;

  /// Masses of B_r at every node of the regular grid with per_axis points.
  std::vector<double> mass_on_grid(double r, int per_axis) const;

  /// Rounding-level error estimate for mass().
  double mass_error_bound() const;

  BallStat ball_stat(const Point& center, double r) const;

  /// Weight w(offset) with optional gradient output, offset = y - center.
  using WeightFn = std::function<double(const Vec& offset, Vec* grad)>;

  /// sup over B_r(center) of w(y - center) |psi(y)|^2. Used by the harmonic lift.
  SupResult weighted_psi_sq_sup(const Vec& center, double r, const WeightFn& weight) const;

 private:
  struct MassTerm {
    std::array<int, 3> xi{};
    double re = 0.0;
    double im = 0.0;
    double freq = 0.0;
  };

  void build();

  TrigPolynomial field_;
  double lambda_;
  ProbeOptions options_;
  SampledField grid_;
  std::vector<double> q_grid_;
  std::vector<MassTerm> mass_terms_;
};

/// Fourier transform of the indicator of an n-ball: int_{|y|<=r} e^{2 pi i xi.y} dy.
double ball_indicator_transform(double freq, double r, int n);

// Single-query conveniences; each builds a throwaway probe.
double sup_on_ball(const EigenfunctionSpec& spec, const Point& center, double s, double tol = 1e-3);
double l2_on_ball(const EigenfunctionSpec& spec, const Point& center, double r, double tol = 1e-3);
double l2_on_ball(const TrigPolynomial& field, const Point& center, double r);
double q_on_ball(const EigenfunctionSpec& spec, const Point& center, double s, double lambda,
                 double tol = 1e-3);

/// Midpoint-rule quadrature of |f|^2 over a ball on a grid of spacing h:
/// interior cells counted whole, boundary cells by a 4^n subsample fraction.
/// O(h) boundary error; kept as an independent route to BallProbe::mass.
double l2_on_ball_quadrature(const TrigPolynomial& field, const Point& center, double r, double h);

}  // namespace nodalscope
