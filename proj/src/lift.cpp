#include "nodalscope/lift.hpp"

#include <algorithm>
#include <cmath>

#include "nodalscope/errors.hpp"

namespace nodalscope {

namespace {

void check_t(double t, double sqrt_lambda) {
  if (std::fabs(t) > 1.0) throw RangeError("lift: |t| must not exceed 1");
  if (t * sqrt_lambda > 700.0) throw RangeError("lift: t sqrt(lambda) > 700 overflows");
}

}  // namespace

LiftedField::LiftedField(const EigenfunctionSpec& spec)
    : field_(spec.field()), lambda_(spec.lambda()), sqrt_lambda_(std::sqrt(spec.lambda())) {}

double LiftedField::operator()(const Vec& x, double t) const {
  check_t(t, sqrt_lambda_);
  return field_.value(x) * std::exp(t * sqrt_lambda_);
}

double lift_evaluate(const EigenfunctionSpec& spec, const Point& x, double t) {
  return LiftedField(spec)(x.vec(), t);
}

double harmonicity_residual(const EigenfunctionSpec& spec, const Point& x, double t, double h) {
  if (!(h > 0.0) || h >= 1e-2) throw RangeError("stencil spacing must lie in (0, 1e-2)");
  const LiftedField H(spec);
  check_t(t + h, std::sqrt(spec.lambda()));
  check_t(t - h, std::sqrt(spec.lambda()));
  const Vec& c = x.vec();
  const double h0 = H(c, t);
  double lap = (H(c, t + h) + H(c, t - h) - 2.0 * h0) / (h * h);
  for (int d = 0; d < spec.dim(); ++d) {
    Vec p = c, q = c;
    p[d] += h;
    q[d] -= h;
    lap += (H(p, t) + H(q, t) - 2.0 * h0) / (h * h);
  }
  return std::fabs(lap);
}

namespace {

// Sup over the (n+1)-ball B_s((x, tau)) of H^2 equals
// e^{2 tau sqrt(lambda)} e^{2 s sqrt(lambda)} sup_{|o| <= s} psi^2(x + o) w_s(o),
// w_s(o) = exp(2 sqrt(lambda) (sqrt(s^2 - |o|^2) - s)) in (0, 1].
BallProbe::WeightFn lift_weight(double s, double sqrt_lambda, int dim) {
  return [s, sqrt_lambda, dim](const Vec& o, Vec* grad) {
    double o2 = 0.0;
    for (int d = 0; d < dim; ++d) o2 += o[d] * o[d];
    const double root = std::sqrt(std::max(s * s - o2, 0.0));
    const double w = std::exp(2.0 * sqrt_lambda * (root - s));
    if (grad) {
      const double safe = std::max(root, 1e-12 * s);
      for (int d = 0; d < dim; ++d) (*grad)[d] = -2.0 * sqrt_lambda * w * o[d] / safe;
    }
    return w;
  };
}

}  // namespace

CubeIndex cube_doubling_index(const BallProbe& probe, const Point& cube_center, double r,
                              const CubeScanOptions& options) {
  if (!(r > 0.0) || r > 0.125) throw RangeError("cube_doubling_index needs 0 < r <= 1/8");
  if (options.subgrid < 2) throw RangeError("cube_doubling_index: subgrid must be >= 2");
  const int n = probe.dim();
  const double sl = std::sqrt(probe.lambda());
  CubeIndex out;
  out.center = cube_center;
  out.half_side = r;
  out.argmax_x = cube_center.vec();

  const int g = options.subgrid;
  const double step = 2.0 * r / (g - 1);
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= g;

  bool found = false;
  for (int level = 0; level < options.scale_levels && !out.budget_exhausted; ++level) {
    const double s = r / std::ldexp(1.0, level);
    const auto w1 = lift_weight(s, sl, n);
    const auto w2 = lift_weight(2.0 * s, sl, n);
    for (std::size_t c = 0; c < total; ++c) {
      Vec off{};
      std::size_t rest = c;
      bool inside = true;
      for (int d = 0; d < n; ++d) {
        off[d] = -r + step * static_cast<double>(rest % g);
        rest /= g;
        if (std::fabs(off[d]) + s > r * (1.0 + 1e-12)) inside = false;
      }
      if (!inside) continue;
      if (out.balls_scanned >= options.budget) {
        out.budget_exhausted = true;
        break;
      }
      ++out.balls_scanned;
      Vec x = cube_center.vec();
      for (int d = 0; d < n; ++d) x[d] += off[d];
      const double den = probe.weighted_psi_sq_sup(x, s, w1).value;
      if (!(den >= 1e-300)) continue;
      const double num = probe.weighted_psi_sq_sup(x, 2.0 * s, w2).value;
      const double value = std::log(num / den) + 2.0 * sl * s;
      if (!found || value > out.n_value) {
        found = true;
        out.n_value = value;
        out.argmax_scale = s;
        out.argmax_t = 0.0;
        for (int d = 0; d < n; ++d) out.argmax_x[d] = reduce_unit(x[d]);
      }
    }
  }
  out.n_value = std::max(out.n_value, 0.0);
  return out;
}

double logunov_bound(double n_value, double r, double alpha, double kappa, int dim_d) {
  if (!(alpha > 0.5)) throw RangeError("logunov_bound needs alpha > 1/2");
  if (!(n_value >= 0.0)) throw RangeError("logunov_bound needs N >= 0");
  return kappa * std::pow(2.0 * r * std::sqrt(double(dim_d)), dim_d - 1) *
         std::pow(n_value, 2.0 * alpha);
}

}  // namespace nodalscope
