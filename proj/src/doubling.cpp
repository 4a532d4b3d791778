#include "nodalscope/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodalscope/errors.hpp"
#include "nodalscope/parallel.hpp"

namespace nodalscope {
namespace {

constexpr double kTiny = 1e-300;

double checked_ratio_log(double num, double den, const char* what) {
  if (!(den >= kTiny)) throw DegenerateBallError(std::string(what) + ": vanishing denominator");
  // The inner value is attained inside the outer region, so it bounds the outer sup.
  return std::log(std::max(num, den) / den);
}

double psi_sup(const BallProbe& p, const Point& x, double s) {
  return p.sup(Channel::PsiSq, x.vec(), s).value;
}

BallProbe one_off(const EigenfunctionSpec& spec, double tol) {
  ProbeOptions o;
  o.tol = tol;
  return BallProbe(spec, o);
}

}  // namespace

double doubling_index_sup(const BallProbe& probe, const Point& x, double delta) {
  if (!(delta > 0.0) || 2.0 * delta > 0.5) throw RangeError("doubling index needs 0 < 2 delta <= 1/2");
  return checked_ratio_log(psi_sup(probe, x, 2.0 * delta), psi_sup(probe, x, delta),
                           "doubling_index_sup");
}

double doubling_index_sup(const EigenfunctionSpec& spec, const Point& x, double delta, double tol) {
  return doubling_index_sup(one_off(spec, tol), x, delta);
}

double doubling_index_l2(const BallProbe& probe, const Point& x, double delta) {
  if (!(delta > 0.0) || 2.0 * delta > 0.5) throw RangeError("doubling index needs 0 < 2 delta <= 1/2");
  const double den = probe.mass(x.vec(), delta);
  if (!(den >= kTiny)) throw DegenerateBallError("doubling_index_l2: vanishing ball mass");
  return std::log(probe.mass(x.vec(), 2.0 * delta) / den);
}

double doubling_index_l2(const EigenfunctionSpec& spec, const Point& x, double delta, double tol) {
  if (!(delta > 0.0) || 2.0 * delta > 0.5) throw RangeError("doubling index needs 0 < 2 delta <= 1/2");
  const double den = l2_on_ball(spec, x, delta, tol);
  if (!(den >= kTiny)) throw DegenerateBallError("doubling_index_l2: vanishing ball mass");
  return std::log(l2_on_ball(spec, x, 2.0 * delta, tol) / den);
}

double q_growth_ratio(const BallProbe& probe, const Point& x, double s) {
  if (!(s > 0.0) || 4.0 * s > 0.5) throw RangeError("q growth ratio needs 0 < 4s <= 1/2");
  const double num = probe.sup(Channel::Q, x.vec(), 4.0 * s).value;
  const double den = probe.sup(Channel::Q, x.vec(), s).value;
  return std::exp(checked_ratio_log(num, den, "q_growth_ratio"));
}

double q_growth_ratio(const EigenfunctionSpec& spec, const Point& x, double s, double tol) {
  return q_growth_ratio(one_off(spec, tol), x, s);
}

double three_ball_index(const BallProbe& probe, const Point& x, double s) {
  if (!(s > 0.0) || 3.0 * s > 0.5) throw RangeError("three-ball index needs 0 < 3s <= 1/2");
  return checked_ratio_log(psi_sup(probe, x, 3.0 * s), psi_sup(probe, x, s), "three_ball_index");
}

double df_three_ball(const BallProbe& probe, const Point& x, double h_ball) {
  if (!(h_ball > 0.0) || h_ball > 0.5) throw RangeError("three-ball ratio needs 0 < h <= 1/2");
  const double num = psi_sup(probe, x, h_ball);
  const double den = probe.sup(Channel::PsiSq, x.vec(), h_ball / 5.0, h_ball / 10.0).value;
  return std::exp(checked_ratio_log(num, den, "df_three_ball"));
}

double fit_growth_constant(std::span<const DoublingRecord> records, double r, double lambda) {
  if (records.empty()) throw RangeError("fit_growth_constant: no records");
  const double scale = r * std::sqrt(lambda);
  if (!(scale > 0.0)) throw RangeError("fit_growth_constant: r sqrt(lambda) must be positive");
  double best = 0.0;
  for (const auto& rec : records) {
    if (rec.delta >= 10.0 * r) throw RangeError("fit_growth_constant: record with delta >= 10 r");
    best = std::max(best, rec.index_sup / scale);
  }
  return best;
}

bool lower_bound_check(const BallProbe& probe, const Point& x, double delta, double r, double c) {
  if (!(delta > 0.0) || delta > 0.5 * r) throw RangeError("lower bound check needs 0 < delta <= r/2");
  const double sup = psi_sup(probe, x, delta);
  const double rhs_log = -c * r * std::sqrt(probe.lambda()) * std::log(r / delta);
  return sup > 0.0 && std::log(sup) >= rhs_log;
}

bool lower_bound_check_l2(const BallProbe& probe, const Point& x, double delta, double r,
                          double c) {
  if (!(delta > 0.0) || delta > 0.5 * r) throw RangeError("lower bound check needs 0 < delta <= r/2");
  const double avg = probe.mass(x.vec(), delta) / std::pow(delta, probe.dim());
  const double rhs_log = -c * r * std::sqrt(probe.lambda()) * std::log(r / delta);
  return avg > 0.0 && std::log(avg) >= rhs_log;
}

std::vector<double> default_scales(double lambda, double r) {
  if (!(lambda > 0.0)) throw RangeError("default_scales: lambda must be positive");
  if (!(r > 0.0)) throw RangeError("default_scales: r must be positive");
  const double top = std::min(10.0 * r, 0.25);
  std::vector<double> out;
  for (double d = 1.0 / std::sqrt(lambda); d <= top && d < 10.0 * r; d *= 2.0) out.push_back(d);
  return out;
}

std::vector<DoublingRecord> scan_doubling(const BallProbe& probe, double r,
                                          std::span<const Point> centers,
                                          std::span<const double> scales, int threads) {
  for (double d : scales)
    if (!(d > 0.0) || 2.0 * d > 0.5) throw RangeError("scan_doubling: scale outside (0, 1/4]");
  const double lambda = probe.lambda();
  const double inv_sqrt = lambda > 0.0 ? 1.0 / std::sqrt(lambda) : std::numeric_limits<double>::infinity();
  const std::size_t ns = scales.size();
  std::vector<DoublingRecord> out(centers.size() * ns);

  parallel_for(centers.size(), [&](std::size_t ci) {
    const Point& x = centers[ci];
    // Dyadic sweeps share radii between consecutive scales; cache by radius.
    std::vector<std::pair<double, double>> psi_cache, q_cache;
    auto cached = [&](std::vector<std::pair<double, double>>& cache, Channel ch, double s) {
      for (const auto& [rad, v] : cache)
        if (std::fabs(rad - s) <= 1e-14 * s) return v;
      const double v = probe.sup(ch, x.vec(), s).value;
      cache.emplace_back(s, v);
      return v;
    };
    for (std::size_t si = 0; si < ns; ++si) {
      const double d = scales[si];
      DoublingRecord rec;
      rec.center = x;
      rec.delta = d;
      rec.r = r;
      rec.lambda = lambda;
      rec.index_sup = checked_ratio_log(cached(psi_cache, Channel::PsiSq, 2.0 * d),
                                        cached(psi_cache, Channel::PsiSq, d), "scan_doubling");
      const double m1 = probe.mass(x.vec(), d);
      if (!(m1 >= kTiny)) throw DegenerateBallError("scan_doubling: vanishing ball mass");
      rec.index_l2 = std::log(probe.mass(x.vec(), 2.0 * d) / m1);
      if (d > inv_sqrt && d < 2.0 * r && 4.0 * d <= 0.5)
        rec.index_q = checked_ratio_log(cached(q_cache, Channel::Q, 4.0 * d),
                                        cached(q_cache, Channel::Q, d), "scan_doubling");
      out[ci * ns + si] = rec;
    }
  }, threads);
  return out;
}

DoublingSummary summarize_doubling(std::span<const DoublingRecord> records, long m, double r,
                                   double lambda) {
  DoublingSummary s;
  s.m = m;
  s.lambda = lambda;
  s.r = r;
  s.n_records = records.size();
  for (const auto& rec : records) s.max_index = std::max(s.max_index, rec.index_sup);
  if (!records.empty()) s.c_star = fit_growth_constant(records, r, lambda);
  return s;
}

}  // namespace nodalscope
