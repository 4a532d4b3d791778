#include "nodalscope/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nodalscope/errors.hpp"

namespace nodalscope {

double default_k1(int dim) { return 0.5 * unit_ball_volume(dim); }
double default_k2(int dim) { return 2.0 * unit_ball_volume(dim); }

EquidistCertificate certify_equidistribution(const BallProbe& probe, double r, double K1, double K2,
                                             const CertifyOptions& options) {
  if (!(r > 0.0) || r > 0.25) throw RangeError("certify needs 0 < r <= 1/4");
  const double lambda = probe.lambda();
  if (lambda > 0.0 && r < 1.0 / std::sqrt(lambda))
    throw RangeError("certify needs r >= lambda^{-1/2}");
  const double e = options.cover_fraction;
  if (!(e > 0.0) || e >= 1.0) throw RangeError("cover_fraction must lie in (0, 1)");

  const int n = probe.dim();
  const int per_axis = cover_per_axis(e * r, n);
  const double rn = std::pow(r, n);

  EquidistCertificate c;
  c.dim = n;
  c.r = r;
  c.K1 = K1;
  c.K2 = K2;
  c.cover_fraction = e;
  c.mode = options.mode;
  c.centers_used = static_cast<int>(std::pow(per_axis, n));

  const auto mid = probe.mass_on_grid(r, per_axis);
  const auto [lo, hi] = std::minmax_element(mid.begin(), mid.end());
  c.min_ratio = *lo / rn;
  c.max_ratio = *hi / rn;

  if (options.mode == CertifyMode::Centers) {
    c.lower_bound = c.min_ratio;
    c.upper_bound = c.max_ratio;
    c.pass = K1 <= c.min_ratio && c.max_ratio <= K2;
    return c;
  }
  const auto inner = probe.mass_on_grid((1.0 - e) * r, per_axis);
  c.lower_bound = *std::min_element(inner.begin(), inner.end()) / rn;
  if (options.early_exit && c.lower_bound < K1) {
    c.upper_bound = std::numeric_limits<double>::quiet_NaN();
    c.pass = false;
    return c;
  }
  const double outer_r = std::min((1.0 + e) * r, 0.5);
  const auto outer = probe.mass_on_grid(outer_r, per_axis);
  c.upper_bound = *std::max_element(outer.begin(), outer.end()) / rn;
  c.pass = K1 <= c.lower_bound && c.upper_bound <= K2;
  return c;
}

namespace {

std::string spec_id(const EigenfunctionSpec& spec) {
  std::string id = "m" + std::to_string(spec.m()) + "-d" + std::to_string(spec.dim());
  if (spec.seed()) id += "-s" + std::to_string(*spec.seed());
  return id;
}

}  // namespace

EquidistCertificate certify_equidistribution(const EigenfunctionSpec& spec, double r, double K1,
                                             double K2, double tol,
                                             const CertifyOptions& options) {
  ProbeOptions po;
  po.tol = tol;
  auto c = certify_equidistribution(BallProbe(spec, po), r, K1, K2, options);
  c.spec_id = spec_id(spec);
  return c;
}

std::vector<double> default_r_grid(double lambda, double r_min_floor) {
  const double lo = std::max(lambda > 0.0 ? 1.0 / std::sqrt(lambda) : 0.0, r_min_floor);
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double r = 0.25 * std::exp2(-j / 4.0);
    if (r < lo) break;
    out.push_back(r);
  }
  return out;
}

namespace {

void check_descending(std::span<const double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] < grid[i - 1])) throw RangeError("r grid must be strictly descending");
}

}  // namespace

std::optional<double> largest_admissible_r(const BallProbe& probe, double K1, double K2,
                                           std::span<const double> r_grid,
                                           const CertifyOptions& options) {
  check_descending(r_grid);
  for (double r : r_grid)
    if (certify_equidistribution(probe, r, K1, K2, options).pass) return r;
  return std::nullopt;
}

std::optional<double> smallest_admissible_r(const BallProbe& probe, double K1, double K2,
                                            std::span<const double> r_grid,
                                            const CertifyOptions& options) {
  check_descending(r_grid);
  std::optional<double> best;
  CertifyOptions o = options;
  o.early_exit = true;
  for (double r : r_grid) {
    if (!certify_equidistribution(probe, r, K1, K2, o).pass) break;
    best = r;
  }
  return best;
}

std::optional<std::size_t> lambda_threshold(std::span<const BallProbe> family, double r,
                                            double K1, double K2,
                                            const CertifyOptions& options) {
  for (std::size_t i = 1; i < family.size(); ++i)
    if (family[i].lambda() < family[i - 1].lambda())
      throw RangeError("lambda_threshold: family must be ordered by ascending lambda");
  std::size_t j = family.size();
  while (j > 0 && certify_equidistribution(family[j - 1], r, K1, K2, options).pass) --j;
  if (j == family.size()) return std::nullopt;
  return j;
}

std::optional<std::size_t> lambda_threshold(std::span<const EigenfunctionSpec> family, double r,
                                            double K1, double K2,
                                            const CertifyOptions& options) {
  std::vector<BallProbe> probes;
  probes.reserve(family.size());
  for (const auto& s : family) probes.emplace_back(s);
  return lambda_threshold(std::span<const BallProbe>(probes), r, K1, K2, options);
}

double rsqrt_lambda(double r, double lambda) { return r * std::sqrt(lambda); }

double eq4_value(double c3, double r, double lambda, double beta) {
  return c3 * std::pow(r, 0.5 - 2.0 * beta) * std::pow(lambda, 0.75 - beta);
}

Calibration calibrate(const NodalStats& nodal, double r, double lambda, long m,
                      std::optional<std::uint64_t> seed, double beta) {
  if (!(r > 0.0) || !(lambda > 0.0)) throw RangeError("calibrate needs r > 0 and lambda > 0");
  Calibration c;
  c.c3 = nodal.nodal_length / eq4_value(1.0, r, lambda, beta);
  c.c4 = nodal.max_singular_count / rsqrt_lambda(r, lambda);
  c.m = m;
  c.lambda = lambda;
  c.r = r;
  c.seed = seed;
  return c;
}

namespace {

const char* verdict(double measured, double predicted) {
  return measured <= predicted * (1.0 + 1e-12) ? "within bound" : "exceeds bound";
}

}  // namespace

BoundsReport build_report(const EquidistCertificate& certificate, long m,
                          std::optional<std::uint64_t> seed, double lambda,
                          const NodalStats& nodal, const DoublingSummary& doubling,
                          const LiftStats& lift, const Calibration& calibration,
                          const ReportConfig& config) {
  if (!certificate.pass)
    throw ConditionalHypothesisError("bounds report requires a passing equidistribution certificate");
  BoundsReport rep;
  rep.m = m;
  rep.seed = seed;
  rep.dim = certificate.dim;
  rep.lambda = lambda;
  rep.r = certificate.r;
  rep.K1 = certificate.K1;
  rep.K2 = certificate.K2;
  rep.nodal = nodal;
  rep.c_star = doubling.c_star;
  rep.max_doubling_index = doubling.max_index;
  rep.n_lift = lift.n_lift;
  rep.n_lift_lower_bound = lift.lower_bound_only;
  rep.config = config;
  rep.calibration = calibration;

  const int n = rep.dim;
  const double r = rep.r;
  const double rs = rsqrt_lambda(r, lambda);

  // Cover count C0 r^{-n}, per-cube bound kappa' r^{n-1} N^{2 alpha} with
  // kappa' = kappa 2^{n-1} (n+1)^{n/2}, and N <= c' r sqrt(lambda).
  const double c_prime = rs > 0.0 ? lift.n_lift / rs : 0.0;
  const double kappa_p = config.kappa * std::pow(2.0, n - 1) * std::pow(n + 1.0, 0.5 * n);
  for (double a : config.alphas) {
    Eq2Point p;
    p.alpha = a;
    p.c1 = cover_cardinality_constant(n) * kappa_p * std::pow(c_prime, 2.0 * a);
    p.value = p.c1 * std::pow(r, 2.0 * a - 1.0) * std::pow(lambda, a);
    rep.eq2.push_back(p);
  }
  rep.eq2_provenance = lift.lower_bound_only ? "config(alpha, kappa); observed(c')"
                                             : "config(alpha, kappa); fitted(c')";

  rep.eq3 = {doubling.c_star * rs, doubling.c_star, "fitted"};
  rep.eq4 = {eq4_value(calibration.c3, r, lambda, config.beta), calibration.c3,
             "calibrated; beta config"};
  rep.eq5 = {calibration.c4 * rs, calibration.c4, "calibrated"};

  rep.verdicts["eq2"] = "formula only";
  rep.verdicts["eq3"] = verdict(doubling.max_index, rep.eq3.value);
  if (n == 2) {
    rep.verdicts["eq4"] = verdict(nodal.nodal_length, rep.eq4.value);
    rep.verdicts["eq5"] = verdict(nodal.max_singular_count, rep.eq5.value);
  } else {
    rep.verdicts["eq4"] = "not measured";
    rep.verdicts["eq5"] = "not measured";
  }
  return rep;
}

bool operator==(const BoundsReport& a, const BoundsReport& b) {
  auto same_bound = [](const PredictedBound& x, const PredictedBound& y) {
    return x.value == y.value && x.constant == y.constant && x.provenance == y.provenance;
  };
  if (a.eq2.size() != b.eq2.size()) return false;
  for (std::size_t i = 0; i < a.eq2.size(); ++i)
    if (a.eq2[i].alpha != b.eq2[i].alpha || a.eq2[i].value != b.eq2[i].value ||
        a.eq2[i].c1 != b.eq2[i].c1)
      return false;
  return a.m == b.m && a.seed == b.seed && a.dim == b.dim && a.lambda == b.lambda &&
         a.r == b.r && a.K1 == b.K1 && a.K2 == b.K2 &&
         a.nodal.nodal_length == b.nodal.nodal_length &&
         a.nodal.max_vanishing_order == b.nodal.max_vanishing_order &&
         a.nodal.max_singular_count == b.nodal.max_singular_count && a.c_star == b.c_star &&
         a.max_doubling_index == b.max_doubling_index && a.n_lift == b.n_lift &&
         a.n_lift_lower_bound == b.n_lift_lower_bound && a.eq2_provenance == b.eq2_provenance &&
         same_bound(a.eq3, b.eq3) && same_bound(a.eq4, b.eq4) && same_bound(a.eq5, b.eq5) &&
         a.verdicts == b.verdicts && a.config.alphas == b.config.alphas &&
         a.config.beta == b.config.beta && a.config.kappa == b.config.kappa &&
         a.calibration.c3 == b.calibration.c3 && a.calibration.c4 == b.calibration.c4 &&
         a.calibration.m == b.calibration.m && a.calibration.lambda == b.calibration.lambda &&
         a.calibration.r == b.calibration.r && a.calibration.seed == b.calibration.seed;
}

}  // namespace nodalscope
