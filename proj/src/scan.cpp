#include "scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace nodalscope::detail {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Candidate {
  double value;
  Vec offset;
};

double norm(const Vec& v, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += v[d] * v[d];
  return std::sqrt(s);
}

Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

void project(Vec& o, const Region& reg, int dim) {
  if (reg.whole) return;
  const double len = norm(o, dim);
  if (len > reg.r_out) {
    const double s = reg.r_out / len;
    for (int d = 0; d < dim; ++d) o[d] *= s;
  } else if (len < reg.r_in) {
    if (len == 0.0) {
      o = {reg.r_in, 0.0, 0.0};
    } else {
      const double s = reg.r_in / len;
      for (int d = 0; d < dim; ++d) o[d] *= s;
    }
  }
}

Candidate ascend(Candidate c, const Region& reg, const ScanObjective& obj, int dim, double h) {
  Vec g{};
  c.value = obj.eval(add(reg.center, c.offset), c.offset, &g);
  double step = h;
  const double step_min = h * 1e-7;
  const double step_max = reg.whole ? 0.25 : std::max(reg.r_out, h);
  for (int it = 0; it < 400 && step > step_min; ++it) {
    if (!reg.whole) {
      const double len = norm(c.offset, dim);
      const bool on_out = len >= reg.r_out * (1.0 - 1e-12);
      const bool on_in = reg.r_in > 0.0 && len <= reg.r_in * (1.0 + 1e-12);
      if ((on_out || on_in) && len > 0.0) {
        double radial = 0.0;
        for (int d = 0; d < dim; ++d) radial += g[d] * c.offset[d] / len;
        if ((on_out && radial > 0.0) || (on_in && radial < 0.0))
          for (int d = 0; d < dim; ++d) g[d] -= radial * c.offset[d] / len;
      }
    }
    const double gn = norm(g, dim);
    if (!(gn > 0.0)) break;
    Vec o = c.offset;
    for (int d = 0; d < dim; ++d) o[d] += step * g[d] / gn;
    project(o, reg, dim);
    Vec g1{};
    const double f1 = obj.eval(add(reg.center, o), o, &g1);
    if (f1 > c.value) {
      c.value = f1;
      c.offset = o;
      g = g1;
      step = std::min(step * 1.5, step_max);
    } else {
      step *= 0.5;
    }
  }
  return c;
}

void sphere_samples(const Region& reg, double radius, int dim, double h, const ScanObjective& obj,
                    std::vector<Candidate>& out) {
  std::vector<Candidate> ring;
  if (dim == 2) {
    int m = 8 * static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / (8.0 * h)));
    m = std::max(m, 64);
    ring.reserve(m);
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * std::numbers::pi * i / m;
      Vec o{radius * std::cos(th), radius * std::sin(th), 0.0};
      // Keep the four axis points exact.
      if (i % (m / 4) == 0) {
        const int q = i / (m / 4);
        o = q == 0 ? Vec{radius, 0, 0} : q == 1 ? Vec{0, radius, 0}
          : q == 2 ? Vec{-radius, 0, 0} : Vec{0, -radius, 0};
      }
      ring.push_back({obj.eval(add(reg.center, o), o, nullptr), o});
    }
  } else {
    const double area = 4.0 * std::numbers::pi * radius * radius / (h * h);
    const int m = std::clamp(static_cast<int>(area), 256, 4096);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    ring.reserve(m);
    for (int i = 0; i < m; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / m;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = golden * i;
      Vec o{radius * rho * std::cos(ph), radius * rho * std::sin(ph), radius * z};
      ring.push_back({obj.eval(add(reg.center, o), o, nullptr), o});
    }
  }
  const std::size_t keep = std::min<std::size_t>(4, ring.size());
  std::partial_sort(ring.begin(), ring.begin() + keep, ring.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  out.insert(out.end(), ring.begin(), ring.begin() + keep);
}

}  // namespace

SupResult scan_sup(const Region& reg, const ScanObjective& obj, int dim, int grid_resolution,
                   const ProbeOptions& options, double deficit) {
  const int N = grid_resolution;
  const double hg = 1.0 / N;
  const bool use_grid = reg.whole || reg.r_out >= 6.0 * hg;
  const double h = use_grid ? hg : reg.r_out / 6.0;

  int lo[3] = {0, 0, 0};
  int cnt[3] = {1, 1, 1};
  for (int d = 0; d < dim; ++d) {
    if (reg.whole) {
      cnt[d] = N;
    } else if (use_grid) {
      lo[d] = static_cast<int>(std::ceil((reg.center[d] - reg.r_out) / h));
      const int hi = static_cast<int>(std::floor((reg.center[d] + reg.r_out) / h));
      cnt[d] = hi - lo[d] + 1;
    } else {
      lo[d] = -6;
      cnt[d] = 13;
    }
  }

  const double ro2 = reg.r_out * reg.r_out;
  const double ri2 = reg.r_in * reg.r_in;
  std::vector<double> vals(static_cast<std::size_t>(cnt[0]) * cnt[1] * cnt[2], kNaN);
  auto cell = [&](int i, int j, int l) {
    return (static_cast<std::size_t>(i) * cnt[1] + j) * cnt[2] + l;
  };
  auto wrap = [N](int i) { return ((i % N) + N) % N; };

  for (int i = 0; i < cnt[0]; ++i)
    for (int j = 0; j < cnt[1]; ++j)
      for (int l = 0; l < cnt[2]; ++l) {
        const int idx[3] = {lo[0] + i, lo[1] + j, lo[2] + l};
        Vec o{};
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
          o[d] = idx[d] * h - (reg.whole ? 0.0 : (use_grid ? reg.center[d] : 0.0));
          r2 += o[d] * o[d];
        }
        if (!reg.whole && (r2 > ro2 || r2 < ri2)) continue;
        double v;
        if (use_grid) {
          std::size_t node = static_cast<std::size_t>(wrap(idx[0])) * N + wrap(idx[1]);
          if (dim == 3) node = node * N + wrap(idx[2]);
          v = obj.node_value(node, o);
        } else {
          v = obj.eval(add(reg.center, o), o, nullptr);
        }
        vals[cell(i, j, l)] = v;
      }

  std::vector<Candidate> maxima;
  for (int i = 0; i < cnt[0]; ++i)
    for (int j = 0; j < cnt[1]; ++j)
      for (int l = 0; l < cnt[2]; ++l) {
        const double v = vals[cell(i, j, l)];
        if (std::isnan(v)) continue;
        bool is_max = true;
        for (int d = 0; d < dim && is_max; ++d)
          for (int s = -1; s <= 1 && is_max; s += 2) {
            int p[3] = {i, j, l};
            p[d] += s;
            if (reg.whole) {
              p[d] = (p[d] + cnt[d]) % cnt[d];
            } else if (p[d] < 0 || p[d] >= cnt[d]) {
              continue;
            }
            if (vals[cell(p[0], p[1], p[2])] > v) is_max = false;
          }
        if (!is_max) continue;
        const int idx[3] = {lo[0] + i, lo[1] + j, lo[2] + l};
        Vec o{};
        for (int d = 0; d < dim; ++d)
          o[d] = idx[d] * h - (reg.whole ? 0.0 : (use_grid ? reg.center[d] : 0.0));
        maxima.push_back({v, o});
      }

  const auto by_value = [](const Candidate& a, const Candidate& b) { return a.value > b.value; };
  const std::size_t k = std::min<std::size_t>(std::max(options.max_candidates, 1), maxima.size());
  std::partial_sort(maxima.begin(), maxima.begin() + k, maxima.end(), by_value);
  maxima.resize(k);

  if (!reg.whole) {
    if (reg.r_in == 0.0) maxima.push_back({obj.eval(reg.center, Vec{}, nullptr), Vec{}});
    sphere_samples(reg, reg.r_out, dim, h, obj, maxima);
    if (reg.r_in > 0.0) sphere_samples(reg, reg.r_in, dim, h, obj, maxima);
  }

  Candidate best{-std::numeric_limits<double>::infinity(), Vec{}};
  for (const auto& c : maxima)
    if (c.value > best.value) best = c;
  for (const auto& c : maxima) {
    const Candidate r = ascend(c, reg, obj, dim, h);
    if (r.value > best.value) best = r;
  }

  SupResult res;
  res.value = best.value;
  for (int d = 0; d < dim; ++d) {
    const double y = reg.center[d] + best.offset[d];
    const double f = y - std::floor(y);
    res.location[d] = f >= 1.0 ? 0.0 : f;
  }
  res.scan_deficit = deficit;
  return res;
}

}  // namespace nodalscope::detail
