#include "cli/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace nodalscope::cli {

MemberMeasurement measure_member(const EigenfunctionSpec& spec, const MeasureOptions& options) {
  const int n = spec.dim();
  const double K1 = options.K1 > 0.0 ? options.K1 : default_k1(n);
  const double K2 = options.K2 > 0.0 ? options.K2 : default_k2(n);
  ProbeOptions po;
  po.tol = options.tol;
  const BallProbe probe(spec, po);

  MemberMeasurement out{spec, {}, false, {}, {}, {}, 0.0, {}, {}, {}, 0.0, 0.0};
  std::optional<double> r = options.r;
  if (!r) {
    const auto grid = default_r_grid(spec.lambda());
    r = smallest_admissible_r(probe, K1, K2, grid, options.certify);
  }
  if (!r) {
    // Report the failing certificate at the largest grid radius.
    out.certificate = certify_equidistribution(probe, 0.25, K1, K2, options.certify);
    return out;
  }
  out.certificate = certify_equidistribution(probe, *r, K1, K2, options.certify);
  out.certified = out.certificate.pass;
  if (!out.certified) return out;

  const CoverSet cover = generate_cover(*r, spec.model());
  const auto scales = default_scales(spec.lambda(), *r);
  out.records = scan_doubling(probe, *r, cover.centers, scales, options.threads);
  out.doubling = summarize_doubling(out.records, spec.m(), *r, spec.lambda());

  if (n == 2) {
    const int N = options.nodal_resolution > 0
                      ? options.nodal_resolution
                      : std::max(nodal_resolution_floor(spec.m()), 512);
    const NodalSet ns = extract_nodal(spec, N);
    out.nodal.nodal_length = ns.length;
    out.nodal_convergence = ns.convergence_estimate;
    out.singular = find_singular_points(spec, N);
    for (const auto& p : out.singular)
      out.nodal.max_vanishing_order = std::max(out.nodal.max_vanishing_order, p.vanishing_order);
    const auto counts = count_singular_in_balls(out.singular, *r, spec.lambda(), cover.centers);
    out.nodal.max_singular_count = counts.max_count;
  }

  out.cube_half_side = std::min(*r, 0.125);
  const std::size_t cubes = std::min<std::size_t>(std::max(options.cubes, 0), cover.centers.size());
  for (std::size_t i = 0; i < cubes; ++i) {
    const std::size_t idx = i * cover.centers.size() / cubes;
    out.cubes.push_back(cube_doubling_index(probe, cover.centers[idx], out.cube_half_side, options.cube));
    out.lift.n_lift = std::max(out.lift.n_lift, out.cubes.back().n_value);
    out.lift.lower_bound_only = true;
  }

  const double sup_grad = std::sqrt(probe.global_sup(Channel::GradSq).value);
  const double sup_psi = std::sqrt(probe.global_sup(Channel::PsiSq).value);
  out.shi_xu_ratio = sup_grad / (std::sqrt(spec.lambda()) * sup_psi);
  return out;
}

}  // namespace nodalscope::cli
