#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nodalscope/doubling.hpp"
#include "nodalscope/fields.hpp"
#include "nodalscope/lift.hpp"

namespace nodalscope {

enum class CertifyMode {
  /// Pass iff K1 r^n <= mass(B_{(1-e)r}(x_i)) and mass(B_{(1+e)r}(x_i)) <= K2 r^n
  /// at every center of the e r cover; this implies the bound for every x.
  Sandwich,
  /// Pass iff K1 <= mass(B_r(x_i))/r^n <= K2 at the cover centers only.
  Centers,
};

struct CertifyOptions {
  double cover_fraction = 0.125;  ///< e: cover radius e r
  CertifyMode mode = CertifyMode::Sandwich;
  bool early_exit = false;  ///< stop at the first failing center
};

struct EquidistCertificate {
  std::string spec_id;
  int dim = 2;
  double r = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double min_ratio = 0.0;  ///< min over centers of mass(B_r)/r^n
  double max_ratio = 0.0;  ///< max over centers of mass(B_r)/r^n
  double lower_bound = 0.0;  ///< min mass(B_{(1-e)r})/r^n: holds for every x
  double upper_bound = 0.0;  ///< max mass(B_{(1+e)r})/r^n: holds for every x
  bool pass = false;
  int centers_used = 0;
  double cover_fraction = 0.125;
  CertifyMode mode = CertifyMode::Sandwich;
};

/// Defaults K1 = vol(B_1)/2, K2 = 2 vol(B_1).
double default_k1(int dim);
double default_k2(int dim);

/// Requires lambda^{-1/2} <= r <= 1/4 (no lower limit when lambda == 0).
EquidistCertificate certify_equidistribution(const BallProbe& probe, double r, double K1, double K2,
                                             const CertifyOptions& options = {});
EquidistCertificate certify_equidistribution(const EigenfunctionSpec& spec, double r, double K1,
                                             double K2, double tol = 1e-3,
                                             const CertifyOptions& options = {});

/// Quarter-octave radii 2^{-2 - j/4}, descending from 1/4 while >= lambda^{-1/2}.
std::vector<double> default_r_grid(double lambda, double r_min_floor = 1.0 / 64);

/// Largest grid radius (grid descending) that certifies.
std::optional<double> largest_admissible_r(const BallProbe& probe, double K1, double K2,
                                           std::span<const double> r_grid,
                                           const CertifyOptions& options = {});

/// Smallest grid radius r such that r and every larger grid radius certify:
/// the shrinking scale at which equidistribution still holds.
std::optional<double> smallest_admissible_r(const BallProbe& probe, double K1, double K2,
                                            std::span<const double> r_grid,
                                            const CertifyOptions& options = {});

/// Least J with every member from J on certifying at (r, K1, K2); family must
/// be ordered by ascending lambda. nullopt when the last member fails.
std::optional<std::size_t> lambda_threshold(std::span<const BallProbe> family, double r,
                                            double K1, double K2,
                                            const CertifyOptions& options = {});
std::optional<std::size_t> lambda_threshold(std::span<const EigenfunctionSpec> family, double r,
                                            double K1, double K2,
                                            const CertifyOptions& options = {});

/// Measured nodal and vanishing data entering the report.
struct NodalStats {
  double nodal_length = 0.0;
  int max_vanishing_order = 0;
  int max_singular_count = 0;
};

struct LiftStats {
  double n_lift = 0.0;  ///< max N(H, Q_r) over the scanned cubes
  bool lower_bound_only = false;
};

struct ReportConfig {
  std::vector<double> alphas{0.55, 0.6, 0.7, 0.8, 0.9, 1.0};
  double beta = 0.01;
  double kappa = 1.0;
};

/// Constants fitted once on a calibration member and then frozen.
struct Calibration {
  double c3 = 0.0;
  double c4 = 0.0;
  long m = 0;
  double lambda = 0.0;
  double r = 0.0;
  std::optional<std::uint64_t> seed;
};

struct PredictedBound {
  double value = 0.0;
  double constant = 0.0;
  std::string provenance;  ///< "fitted", "calibrated", "config", ...
};

struct Eq2Point {
  double alpha = 0.0;
  double value = 0.0;
  double c1 = 0.0;
};

struct BoundsReport {
  // meta
  long m = 0;
  std::optional<std::uint64_t> seed;
  int dim = 2;
  double lambda = 0.0;
  double r = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  // measured
  NodalStats nodal;
  double c_star = 0.0;
  double max_doubling_index = 0.0;
  double n_lift = 0.0;
  bool n_lift_lower_bound = false;
  // predicted
  std::vector<Eq2Point> eq2;
  std::string eq2_provenance;
  PredictedBound eq3;
  PredictedBound eq4;
  PredictedBound eq5;
  /// name -> "within bound" | "exceeds bound" | "formula only" | "not measured"
  std::map<std::string, std::string> verdicts;
  ReportConfig config;
  Calibration calibration;

  friend bool operator==(const BoundsReport&, const BoundsReport&);
};

/// Fits c3 = L / (r^{1/2-2 beta} lambda^{3/4-beta}) and c4 = count / (r sqrt lambda).
Calibration calibrate(const NodalStats& nodal, double r, double lambda, long m,
                      std::optional<std::uint64_t> seed, double beta);

/// Throws ConditionalHypothesisError unless certificate.pass.
BoundsReport build_report(const EquidistCertificate& certificate, long m,
                          std::optional<std::uint64_t> seed, double lambda,
                          const NodalStats& nodal, const DoublingSummary& doubling,
                          const LiftStats& lift, const Calibration& calibration,
                          const ReportConfig& config = {});

/// Predicted right-hand sides as functions of (r, lambda).
double eq4_value(double c3, double r, double lambda, double beta);
double rsqrt_lambda(double r, double lambda);

}  // namespace nodalscope
