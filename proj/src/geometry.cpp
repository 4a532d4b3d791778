#include "nodalscope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nodalscope/errors.hpp"

namespace nodalscope {

TorusModel::TorusModel(int dim) : dim_(dim) {
  if (dim != 2 && dim != 3) throw RangeError("torus dimension must be 2 or 3");
}

double reduce_unit(double v) {
  double r = v - std::floor(v);
  // v slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

double wrapped_delta(double a, double b) {
  double d = reduce_unit(a - b);
  return d >= 0.5 ? d - 1.0 : d;
}

Point::Point(double x, double y) : c_{reduce_unit(x), reduce_unit(y), 0.0}, dim_(2) {}

Point::Point(double x, double y, double z)
    : c_{reduce_unit(x), reduce_unit(y), reduce_unit(z)}, dim_(3) {}

Point::Point(std::span<const double> coords) : dim_(static_cast<int>(coords.size())) {
  if (dim_ != 2 && dim_ != 3) throw RangeError("point dimension must be 2 or 3");
  for (int i = 0; i < dim_; ++i) c_[i] = reduce_unit(coords[i]);
}

Point::Point(const Vec& v, int dim) : dim_(dim) {
  if (dim_ != 2 && dim_ != 3) throw RangeError("point dimension must be 2 or 3");
  for (int i = 0; i < dim_; ++i) c_[i] = reduce_unit(v[i]);
}

double geodesic_distance(const Point& a, const Point& b, const TorusModel& model) {
  double s = 0.0;
  for (int i = 0; i < model.dim(); ++i) {
    double d = std::fabs(a[i] - b[i]);
    d = std::min(d, 1.0 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 / 3.0 * std::numbers::pi;
    default: throw RangeError("unit ball volume: dimension must be 1, 2 or 3");
  }
}

double ball_volume(double r, const TorusModel& model) {
  if (!(r > 0.0)) throw RangeError("ball radius must be positive");
  if (r > TorusModel::injectivity_radius())
    throw EmbeddedBallError("ball radius " + std::to_string(r) + " exceeds 1/2");
  return unit_ball_volume(model.dim()) * std::pow(r, model.dim());
}

double cover_cardinality_constant(int n) { return std::pow(2.0 * std::sqrt(double(n)), n); }

int cover_per_axis(double r, int n) {
  if (!(r > 0.0) || r > 0.25) throw RangeError("cover radius must lie in (0, 1/4]");
  int scale = 1;
  double anchor = r;
  while (anchor <= 0.125) {
    anchor *= 2.0;
    scale *= 2;
  }
  return static_cast<int>(std::ceil(std::sqrt(double(n)) / anchor)) * scale;
}

CoverSet generate_cover(double r, const TorusModel& model, int probe_resolution) {
  const int n = model.dim();
  CoverSet cover;
  cover.radius = r;
  cover.per_axis = cover_per_axis(r, n);
  const int k = cover.per_axis;
  const std::size_t total = n == 2 ? std::size_t(k) * k : std::size_t(k) * k * k;
  cover.centers.reserve(total);
  const double h = 1.0 / k;
  if (n == 2) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) cover.centers.emplace_back(i * h, j * h);
  } else {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) cover.centers.emplace_back(i * h, j * h, l * h);
  }
  cover.overlap_bound = overlap_multiplicity(cover, model, probe_resolution);
  return cover;
}

namespace {

// Candidate center indices along one axis for a probe at lattice offset o
// (in units of the grid spacing, 0 <= o < 1), with squared axis distances.
struct AxisHits {
  std::vector<double> d2;
};

AxisHits axis_hits(double o, double rho, int k) {
  AxisHits hits;
  const int w = static_cast<int>(std::ceil(rho)) + 1;
  if (2 * w + 1 >= k) {
    // Window wraps the whole axis: count each center once, by torus distance.
    for (int j = 0; j < k; ++j) {
      double d = std::fabs(o - j);
      d = std::min(d, double(k) - d);
      if (d <= rho) hits.d2.push_back(d * d);
    }
  } else {
    for (int j = -w; j <= w + 1; ++j) {
      double d = std::fabs(o - j);
      if (d <= rho) hits.d2.push_back(d * d);
    }
  }
  return hits;
}

}  // namespace

int overlap_multiplicity(const CoverSet& cover, const TorusModel& model, int probe_resolution) {
  const int n = model.dim();
  const int k = cover.per_axis;
  if (k <= 1 || cover.centers.empty())
    throw RangeError("overlap multiplicity needs a regular grid cover with > 1 center per axis");
  if (probe_resolution < 2) throw RangeError("probe resolution must be >= 2");

  // The count at a probe depends only on its offset modulo the grid spacing,
  // per axis. Offsets are (i k mod N) / N in spacing units; reflection o -> 1 - o
  // and axis permutations leave the count unchanged.
  const long N = probe_resolution;
  std::vector<long> numerators;
  numerators.reserve(N);
  for (long i = 0; i < N; ++i) {
    long a = (i * k) % N;
    numerators.push_back(std::min(a, N - a));
  }
  std::sort(numerators.begin(), numerators.end());
  numerators.erase(std::unique(numerators.begin(), numerators.end()), numerators.end());

  const double rho = 2.0 * cover.radius * k;  // doubled radius in spacing units
  const double rho2 = rho * rho;
  std::vector<AxisHits> hits;
  hits.reserve(numerators.size());
  for (long a : numerators) hits.push_back(axis_hits(double(a) / double(N), rho, k));

  int best = 0;
  const std::size_t u = hits.size();
  if (n == 2) {
    for (std::size_t i = 0; i < u; ++i)
      for (std::size_t j = i; j < u; ++j) {
        int c = 0;
        for (double x2 : hits[i].d2)
          for (double y2 : hits[j].d2) c += (x2 + y2 <= rho2);
        best = std::max(best, c);
      }
  } else {
    for (std::size_t i = 0; i < u; ++i)
      for (std::size_t j = i; j < u; ++j)
        for (std::size_t l = j; l < u; ++l) {
          int c = 0;
          for (double x2 : hits[i].d2)
            for (double y2 : hits[j].d2)
              for (double z2 : hits[l].d2) c += (x2 + y2 + z2 <= rho2);
          best = std::max(best, c);
        }
  }
  return best;
}

}  // namespace nodalscope
