#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nodalscope/fields.hpp"
#include "nodalscope/geometry.hpp"

namespace nodalscope {

/// Doubling indices at one (center, scale).
struct DoublingRecord {
  Point center;
  double delta = 0.0;
  double index_sup = 0.0;  ///< log sup_{B_2d}|psi|^2 / sup_{B_d}|psi|^2
  double index_l2 = 0.0;   ///< log of the same ratio for L^2 masses
  std::optional<double> index_q;  ///< log sup_{B_4d} q / sup_{B_d} q, where defined
  double r = 0.0;
  double lambda = 0.0;
};

struct DoublingSummary {
  long m = 0;
  double lambda = 0.0;
  double r = 0.0;
  double c_star = 0.0;
  double max_index = 0.0;
  std::size_t n_records = 0;
};

// Each index takes a probe (batch use) or a spec (one-off; builds a probe).
// Preconditions throw RangeError; vanishing denominators throw DegenerateBallError.

/// Requires 0 < 2 delta <= 1/2.
double doubling_index_sup(const BallProbe& probe, const Point& x, double delta);
double doubling_index_sup(const EigenfunctionSpec& spec, const Point& x, double delta,
                          double tol = 1e-3);

/// Requires 0 < 2 delta <= 1/2.
double doubling_index_l2(const BallProbe& probe, const Point& x, double delta);
double doubling_index_l2(const EigenfunctionSpec& spec, const Point& x, double delta,
                         double tol = 1e-3);

/// Ratio sup_{B_4s} q / sup_{B_s} q. Requires 0 < 4s <= 1/2 and s > lambda^{-1/2}.
double q_growth_ratio(const BallProbe& probe, const Point& x, double s);
double q_growth_ratio(const EigenfunctionSpec& spec, const Point& x, double s, double tol = 1e-3);

/// log(sup_{B_3s} |psi|^2 / sup_{B_s} |psi|^2), the three-ball growth ratio. 0 < 3s <= 1/2.
double three_ball_index(const BallProbe& probe, const Point& x, double s);

/// sup_{B_h} |psi|^2 / sup over the annulus h/10 <= d <= h/5.
double df_three_ball(const BallProbe& probe, const Point& x, double h_ball);

/// c* = max index_sup / (r sqrt lambda). Throws RangeError on empty input or
/// a record with delta >= 10 r.
double fit_growth_constant(std::span<const DoublingRecord> records, double r, double lambda);

/// sup_{B_delta}|psi|^2 >= (r/delta)^{-c r sqrt lambda}. Requires delta < r/2.
bool lower_bound_check(const BallProbe& probe, const Point& x, double delta, double r, double c);
/// L^2 form: delta^{-n} int_{B_delta}|psi|^2 >= (r/delta)^{-c r sqrt lambda}.
bool lower_bound_check_l2(const BallProbe& probe, const Point& x, double delta, double r,
                          double c);

/// Dyadic scales lambda^{-1/2} 2^j up to min(10 r, 1/4).
std::vector<double> default_scales(double lambda, double r);

/// Records for every (center, scale); index_q filled where lambda^{-1/2} < delta < 2r
/// and 4 delta <= 1/2.
std::vector<DoublingRecord> scan_doubling(const BallProbe& probe, double r,
                                          std::span<const Point> centers,
                                          std::span<const double> scales, int threads = 0);

DoublingSummary summarize_doubling(std::span<const DoublingRecord> records, long m, double r,
                                   double lambda);

}  // namespace nodalscope
