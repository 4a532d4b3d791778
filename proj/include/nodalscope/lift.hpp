#pragma once

#include "nodalscope/fields.hpp"
#include "nodalscope/geometry.hpp"
#include "nodalscope/spectrum.hpp"

namespace nodalscope {

/// H(x, t) = psi(x) exp(t sqrt lambda), harmonic on T^n x R.
class LiftedField {
 public:
  explicit LiftedField(const EigenfunctionSpec& spec);

  /// Throws RangeError for |t| > 1 or t sqrt(lambda) > 700.
  double operator()(const Vec& x, double t) const;
  double lambda() const { return lambda_; }

 private:
  TrigPolynomial field_;
  double lambda_;
  double sqrt_lambda_;
};

double lift_evaluate(const EigenfunctionSpec& spec, const Point& x, double t);

/// |lap_h H| with the (2n+3)-point stencil in (x, t). Truncation term is
/// h^2/12 (sum_d d^4_x psi + lambda^2 psi) e^{t sqrt lambda}.
double harmonicity_residual(const EigenfunctionSpec& spec, const Point& x, double t, double h);

struct CubeIndex {
  Point center;
  double half_side = 0.0;
  double n_value = 0.0;
  Vec argmax_x{};
  double argmax_t = 0.0;
  double argmax_scale = 0.0;
  std::size_t balls_scanned = 0;
  /// Budget ran out before the scan finished; n_value is a lower bound of the scan.
  bool budget_exhausted = false;
};

struct CubeScanOptions {
  int subgrid = 9;  ///< centers per axis, including the faces
  int scale_levels = 7;  ///< s = r, r/2, ..., r/64
  std::size_t budget = 1u << 20;  ///< max balls (center, scale) to evaluate
};

/// Logunov doubling index of H over Q_r(p) x [-r, r], scanned over Euclidean
/// balls B_s(x, t) inside the cube. On the flat torus Euclidean and geodesic
/// balls coincide, so sups reduce to weighted sups of psi^2 on n-balls.
/// Requires 0 < r <= 1/8.
CubeIndex cube_doubling_index(const BallProbe& probe, const Point& cube_center, double r,
                              const CubeScanOptions& options = {});

/// kappa (2 r sqrt d)^{d-1} N^{2 alpha}: Logunov's per-cube bound with
/// diam(Q) = 2 r sqrt d. Requires alpha > 1/2 and N >= 0.
double logunov_bound(double n_value, double r, double alpha, double kappa, int dim_d);

}  // namespace nodalscope
