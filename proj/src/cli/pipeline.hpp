#pragma once

#include <optional>
#include <vector>

#include "nodalscope/certify.hpp"
#include "nodalscope/doubling.hpp"
#include "nodalscope/lift.hpp"
#include "nodalscope/nodal.hpp"

namespace nodalscope::cli {

struct MeasureOptions {
  double K1 = 0.0;  ///< 0 selects default_k1
  double K2 = 0.0;  ///< 0 selects default_k2
  double tol = 1e-3;
  CertifyOptions certify;
  /// Fixed certification radius; unset searches default_r_grid for the smallest admissible r.
  std::optional<double> r;
  int nodal_resolution = 0;  ///< 0 selects max(floor, 512)
  int cubes = 4;  ///< lift cubes per member, spread over the cover
  CubeScanOptions cube;
  int threads = 0;
};

/// Everything measured on one family member at its certified radius.
struct MemberMeasurement {
  EigenfunctionSpec spec;
  EquidistCertificate certificate;
  bool certified = false;
  // Filled only when certified.
  std::vector<DoublingRecord> records;
  DoublingSummary doubling;
  NodalStats nodal;
  double nodal_convergence = 0.0;
  std::vector<SingularPoint> singular;
  std::vector<CubeIndex> cubes;
  LiftStats lift;
  double cube_half_side = 0.0;
  double shi_xu_ratio = 0.0;  ///< sup|grad psi| / (sqrt(lambda) sup|psi|)
};

MemberMeasurement measure_member(const EigenfunctionSpec& spec, const MeasureOptions& options);

}  // namespace nodalscope::cli
