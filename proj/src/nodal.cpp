#include "nodalscope/nodal.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "log.hpp"
#include "nodalscope/errors.hpp"
#include "nodalscope/parallel.hpp"

namespace nodalscope {

namespace detail {

void log_note(const std::string& msg) {
  if (std::getenv("NODALSCOPE_LOG")) std::fprintf(stderr, "nodalscope: %s\n", msg.c_str());
}

}  // namespace detail

namespace {

struct RawSegment {
  NodalSegment seg;
  std::size_t ea, eb;  // edge ids of the endpoints
};

std::vector<RawSegment> march(const TrigPolynomial& field, const std::vector<double>& v, int n) {
  const double h = 1.0 / n;
  const std::size_t N = n;
  auto val = [&](std::size_t i, std::size_t j) { return v[(i % N) * N + (j % N)]; };
  auto xedge = [&](std::size_t i, std::size_t j) { return 2 * ((i % N) * N + (j % N)); };
  auto yedge = [&](std::size_t i, std::size_t j) { return 2 * ((i % N) * N + (j % N)) + 1; };

  std::vector<std::vector<RawSegment>> rows(N);
  parallel_for(N, [&](std::size_t i) {
    auto& out = rows[i];
    for (std::size_t j = 0; j < N; ++j) {
      const double c[4] = {val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)};
      int mask = 0;
      for (int k = 0; k < 4; ++k)
        if (c[k] > 0.0) mask |= 1 << k;
      if (mask == 0 || mask == 15) continue;
      // Edge k joins corner k and corner k+1; vertices use the canonical
      // (low node to high node) orientation so shared edges agree bit for bit.
      Vec p[4];
      std::size_t id[4];
      bool cross[4];
      auto xcross = [&](double a, double b, double x0, double y0) {
        const double t = a / (a - b);
        return Vec{x0 + t * h, y0, 0.0};
      };
      auto ycross = [&](double a, double b, double x0, double y0) {
        const double t = a / (a - b);
        return Vec{x0, y0 + t * h, 0.0};
      };
      const double x0 = i * h, y0 = j * h;
      p[0] = xcross(c[0], c[1], x0, y0);
      id[0] = xedge(i, j);
      p[1] = ycross(c[1], c[2], x0 + h, y0);
      id[1] = yedge(i + 1, j);
      p[2] = xcross(c[3], c[2], x0, y0 + h);
      id[2] = xedge(i, j + 1);
      p[3] = ycross(c[0], c[3], x0, y0);
      id[3] = yedge(i, j);
      for (int k = 0; k < 4; ++k) cross[k] = (c[k] > 0.0) != (c[(k + 1) % 4] > 0.0);

      auto emit = [&](int a, int b) { out.push_back({{p[a], p[b]}, id[a], id[b]}); };
      if (mask == 5 || mask == 10) {
        const double mid = field.value(Vec{x0 + 0.5 * h, y0 + 0.5 * h, 0.0});
        const bool center_pos = mid > 0.0;
        // Corners whose sign differs from the center get cut off.
        const bool c0_pos = (mask & 1) != 0;
        if (c0_pos == center_pos) {
          emit(0, 1);  // corner 1
          emit(2, 3);  // corner 3
        } else {
          emit(3, 0);  // corner 0
          emit(1, 2);  // corner 2
        }
        continue;
      }
      int e[2], m = 0;
      for (int k = 0; k < 4; ++k)
        if (cross[k]) e[m++] = k;
      emit(e[0], e[1]);
    }
  });
  std::vector<RawSegment> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  return all;
}

Vec reduce(const Vec& v) { return {reduce_unit(v[0]), reduce_unit(v[1]), 0.0}; }

void stitch(NodalSet& ns, const std::vector<RawSegment>& raw, int n) {
  const std::size_t edges = 2 * static_cast<std::size_t>(n) * n;
  std::vector<std::array<int, 2>> at(edges, {-1, -1});
  for (std::size_t s = 0; s < raw.size(); ++s)
    for (std::size_t e : {raw[s].ea, raw[s].eb}) {
      auto& slot = at[e];
      (slot[0] < 0 ? slot[0] : slot[1]) = static_cast<int>(s);
    }
  std::vector<bool> used(raw.size(), false);
  for (std::size_t s0 = 0; s0 < raw.size(); ++s0) {
    if (used[s0]) continue;
    std::vector<Vec> chain{reduce(raw[s0].seg.a)};
    used[s0] = true;
    const std::size_t start_edge = raw[s0].ea;
    std::size_t edge = raw[s0].eb;
    Vec tip = raw[s0].seg.b;
    bool closed = false;
    while (true) {
      chain.push_back(reduce(tip));
      if (edge == start_edge) {
        closed = true;
        chain.pop_back();
        break;
      }
      int next = -1;
      for (int s : at[edge])
        if (s >= 0 && !used[s]) next = s;
      if (next < 0) break;
      used[next] = true;
      const auto& r = raw[next];
      if (r.ea == edge) {
        edge = r.eb;
        tip = r.seg.b;
      } else {
        edge = r.ea;
        tip = r.seg.a;
      }
    }
    ns.polylines.push_back(std::move(chain));
    ns.closed.push_back(closed);
  }
}

double segments_length(const std::vector<RawSegment>& raw) {
  double s = 0.0;
  for (const auto& r : raw) s += std::hypot(r.seg.b[0] - r.seg.a[0], r.seg.b[1] - r.seg.a[1]);
  return s;
}

std::vector<double> snapped_values(const TrigPolynomial& field, int n, int& perturbed) {
  SampledField s = sample(field, n);
  const double eps = 64.0 * DBL_EPSILON * field.coefficient_l1();
  perturbed = 0;
  for (double& v : s.values)
    if (std::fabs(v) <= eps) {
      v = 1e-12;
      ++perturbed;
    }
  return std::move(s.values);
}

NodalSet extract_impl(const TrigPolynomial& field, int n) {
  if (field.dim() != 2) throw RangeError("nodal extraction is implemented for n = 2 only");
  NodalSet ns;
  ns.resolution = n;
  const auto values = snapped_values(field, n, ns.perturbed_nodes);
  if (ns.perturbed_nodes > 0)
    detail::log_note("extract_nodal: nudged " + std::to_string(ns.perturbed_nodes) +
                     " zero nodes by +1e-12");
  const auto raw = march(field, values, n);
  ns.segments.reserve(raw.size());
  for (const auto& r : raw) ns.segments.push_back(r.seg);
  ns.length = segments_length(raw);
  stitch(ns, raw, n);

  const int half = n / 2;
  const int cutoff = static_cast<int>(2 * std::ceil(field.max_frequency() - 1e-12) + 2);
  if (n % 2 == 0 && half >= cutoff && ns.length > 0.0) {
    int dummy = 0;
    const double coarse = segments_length(march(field, snapped_values(field, half, dummy), half));
    ns.convergence_estimate = std::fabs(ns.length - coarse) / ns.length;
  }
  return ns;
}

}  // namespace

int nodal_resolution_floor(long m) { return 4 * nyquist_resolution(m); }

NodalSet extract_nodal(const EigenfunctionSpec& spec, int resolution) {
  const int floor = nodal_resolution_floor(spec.m());
  if (resolution < floor) throw ResolutionError(resolution, floor);
  return extract_impl(spec.field(), resolution);
}

NodalSet extract_nodal(const TrigPolynomial& field, int resolution) {
  return extract_impl(field, resolution);
}

double nodal_length(const NodalSet& ns) {
  double s = 0.0;
  for (const auto& g : ns.segments) s += std::hypot(g.b[0] - g.a[0], g.b[1] - g.a[1]);
  return s;
}

double max_distance_to_nodal(const NodalSet& ns, std::span<const Point> centers) {
  if (ns.segments.empty()) throw RangeError("max_distance_to_nodal: empty nodal set");
  double worst = 0.0;
  for (const auto& c : centers) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : ns.segments) {
      // Nearest image of the center relative to the segment start.
      const double px = g.a[0] + wrapped_delta(c[0], g.a[0]);
      const double py = g.a[1] + wrapped_delta(c[1], g.a[1]);
      const double dx = g.b[0] - g.a[0], dy = g.b[1] - g.a[1];
      const double len2 = dx * dx + dy * dy;
      double t = len2 > 0.0 ? ((px - g.a[0]) * dx + (py - g.a[1]) * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, std::hypot(px - g.a[0] - t * dx, py - g.a[1] - t * dy));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<SingularPoint> find_singular_points(const EigenfunctionSpec& spec, int resolution) {
  if (spec.dim() != 2) throw RangeError("singular point search is implemented for n = 2 only");
  const int floor = nodal_resolution_floor(spec.m());
  if (resolution < floor) throw ResolutionError(resolution, floor);
  const auto& f = spec.field();
  const SampledField s = sample(spec, resolution, true);
  const int n = resolution;
  const double h = 1.0 / n;
  // |grad psi| <= sup|Hess psi| * dist; nearest corner lies within h sqrt(2)/2.
  const double theta = spec.lambda() * f.coefficient_l1() * h * std::numbers::sqrt2;

  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t idx[4] = {s.index(i, j), s.index(i + 1, j), s.index(i + 1, j + 1),
                                  s.index(i, j + 1)};
      bool pos = false, neg = false, slow = false;
      for (std::size_t k : idx) {
        (s.values[k] > 0.0 ? pos : neg) = true;
        if (s.values[k] == 0.0) pos = neg = true;
        if (std::hypot(s.gradient[2 * k], s.gradient[2 * k + 1]) < theta) slow = true;
      }
      if (pos && neg && slow) cells.emplace_back(i, j);
    }

  ProbeOptions popt;
  const BallProbe probe(spec, popt);
  std::vector<SingularPoint> found;
  int dropped = 0;
  for (const auto& [i, j] : cells) {
    Vec x{(i + 0.5) * h, (j + 0.5) * h, 0.0};
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const Jet jt = f.jet(x);
      const double a = jt.hess[0][0], b = jt.hess[0][1], d = jt.hess[1][1];
      const double det = a * d - b * b;
      if (det == 0.0) break;
      const double dx = (d * jt.grad[0] - b * jt.grad[1]) / det;
      const double dy = (a * jt.grad[1] - b * jt.grad[0]) / det;
      x[0] -= dx;
      x[1] -= dy;
      if (std::hypot(dx, dy) < 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      ++dropped;
      continue;
    }
    const Jet jt = f.jet(x);
    const double residual = std::max(std::fabs(jt.value), std::hypot(jt.grad[0], jt.grad[1]));
    if (!(residual < 1e-8)) continue;
    const Point p(x, 2);
    bool dup = false;
    for (const auto& q : found)
      if (geodesic_distance(p, q.location, spec.model()) <= h) dup = true;
    if (dup) continue;
    SingularPoint sp;
    sp.location = p;
    sp.residual = residual;
    try {
      sp.vanishing_order = std::max(2, vanishing_order(probe, p).order);
    } catch (const AmbiguousOrderError& e) {
      sp.vanishing_order = std::max(2, static_cast<int>(std::lround(e.slope() / 2.0)));
      detail::log_note("find_singular_points: ambiguous order, slope " + std::to_string(e.slope()));
    }
    found.push_back(sp);
  }
  if (dropped > 0)
    detail::log_note("find_singular_points: dropped " + std::to_string(dropped) +
                     " candidates without Newton convergence");
  std::sort(found.begin(), found.end(), [](const SingularPoint& a, const SingularPoint& b) {
    return a.location.vec() < b.location.vec();
  });
  return found;
}

VanishingOrder vanishing_order(const BallProbe& probe, const Point& x, double delta_max) {
  if (!(delta_max > 0.0) || delta_max > 0.5) throw RangeError("vanishing_order: delta_max in (0, 1/2]");
  constexpr int kRadii = 7;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int j = 0; j < kRadii; ++j) {
    const double d = delta_max / std::ldexp(1.0, j);
    const double sup = probe.sup(Channel::PsiSq, x.vec(), d).value;
    const double lx = std::log(d), ly = std::log(std::max(sup, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  VanishingOrder out;
  out.slope = (kRadii * sxy - sx * sy) / (kRadii * sxx - sx * sx);
  const double half = out.slope / 2.0;
  const double rounded = std::round(half);
  if (std::fabs(half - rounded) > 0.25) throw AmbiguousOrderError(out.slope);
  out.order = static_cast<int>(rounded);
  const double v = probe.field().value(x.vec());
  out.at_zero = std::fabs(v) <= 1e-6 * std::max(1.0, probe.field().coefficient_l1());
  return out;
}

VanishingOrder vanishing_order(const EigenfunctionSpec& spec, const Point& x, double delta_max) {
  return vanishing_order(BallProbe(spec), x, delta_max);
}

SingularBallCounts count_singular_in_balls(std::span<const SingularPoint> points, double r,
                                           double lambda, std::span<const Point> centers,
                                           std::optional<double> radius_override) {
  if (!(lambda > 0.0) || r < 1.0 / std::sqrt(lambda))
    throw RangeError("count_singular_in_balls: needs r >= lambda^{-1/2}");
  SingularBallCounts out;
  out.radius = radius_override ? *radius_override : std::sqrt(r) * std::pow(lambda, -0.25);
  out.counts.assign(centers.size(), 0);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const TorusModel model(centers[c].dim());
    for (const auto& p : points)
      if (geodesic_distance(centers[c], p.location, model) <= out.radius)
        out.counts[c] += p.vanishing_order - 1;
    out.max_count = std::max(out.max_count, out.counts[c]);
  }
  return out;
}

}  // namespace nodalscope
