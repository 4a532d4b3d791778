#include "nodalscope/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "nodalscope/errors.hpp"
#include "trig_kernel.hpp"

namespace nodalscope {

using detail::kTwoPi;
using detail::mode_phase;

long ModeVector::norm2() const {
  long s = 0;
  for (int d = 0; d < dim; ++d) s += long(k[d]) * k[d];
  return s;
}

bool ModeVector::is_zero() const { return norm2() == 0; }

bool ModeVector::is_canonical() const {
  for (int d = 0; d < dim; ++d) {
    if (k[d] > 0) return true;
    if (k[d] < 0) return false;
  }
  return false;
}

TrigPolynomial::TrigPolynomial(int dim, std::vector<Mode> modes)
    : dim_(dim), modes_(std::move(modes)) {
  if (dim != 2 && dim != 3) throw InvalidSpecError("field dimension must be 2 or 3");
  for (const auto& m : modes_)
    if (m.k.dim != dim) throw InvalidSpecError("mode dimension mismatch");
}

TrigPolynomial TrigPolynomial::constant(int dim, double value) {
  Mode m;
  m.k.dim = dim;
  m.a = value;
  return TrigPolynomial(dim, {m});
}

double TrigPolynomial::max_frequency() const {
  long best = 0;
  for (const auto& m : modes_) best = std::max(best, m.k.norm2());
  return std::sqrt(double(best));
}

double TrigPolynomial::coefficient_l1() const {
  double s = 0.0;
  for (const auto& m : modes_) s += std::fabs(m.a) + (m.k.is_zero() ? 0.0 : std::fabs(m.b));
  return s;
}

double TrigPolynomial::l2_norm_sq() const {
  // Assumes distinct canonical frequencies; the constant term has norm a^2.
  double s = 0.0;
  for (const auto& m : modes_) s += m.k.is_zero() ? m.a * m.a : 0.5 * (m.a * m.a + m.b * m.b);
  return s;
}

double TrigPolynomial::value(const Vec& x) const {
  double v = 0.0;
  for (const auto& m : modes_) {
    const double th = kTwoPi * mode_phase(m.k, x, dim_);
    v += m.a * std::cos(th) + m.b * std::sin(th);
  }
  return v;
}

Vec TrigPolynomial::gradient(const Vec& x) const {
  double v;
  Vec g;
  value_gradient(x, v, g);
  return g;
}

void TrigPolynomial::value_gradient(const Vec& x, double& v, Vec& g) const {
  v = 0.0;
  g = {0.0, 0.0, 0.0};
  for (const auto& m : modes_) {
    const double th = kTwoPi * mode_phase(m.k, x, dim_);
    const double c = std::cos(th), s = std::sin(th);
    v += m.a * c + m.b * s;
    const double dv = kTwoPi * (m.b * c - m.a * s);
    for (int d = 0; d < dim_; ++d) g[d] += dv * m.k.k[d];
  }
}

Jet TrigPolynomial::jet(const Vec& x) const {
  Jet j;
  const double w2 = kTwoPi * kTwoPi;
  for (const auto& m : modes_) {
    const double th = kTwoPi * mode_phase(m.k, x, dim_);
    const double c = std::cos(th), s = std::sin(th);
    const double f = m.a * c + m.b * s;
    j.value += f;
    const double dv = kTwoPi * (m.b * c - m.a * s);
    for (int d = 0; d < dim_; ++d) {
      j.grad[d] += dv * m.k.k[d];
      for (int e = 0; e < dim_; ++e) j.hess[d][e] -= w2 * f * m.k.k[d] * m.k.k[e];
    }
  }
  return j;
}

EigenfunctionSpec::EigenfunctionSpec(TorusModel model, long m, std::vector<Mode> modes,
                                     std::optional<std::uint64_t> seed)
    : model_(model), m_(m), seed_(seed) {
  if (m < 1) throw InvalidSpecError("m must be positive");
  if (modes.empty()) throw InvalidSpecError("eigenfunction needs at least one mode");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& md = modes[i];
    if (md.k.dim != model.dim()) throw InvalidSpecError("mode dimension mismatch");
    if (md.k.norm2() != m)
      throw InvalidSpecError("mode " + std::to_string(i) + " has |k|^2 != " + std::to_string(m));
    if (!md.k.is_canonical())
      throw InvalidSpecError("mode " + std::to_string(i) + " is not canonical");
    for (std::size_t j = 0; j < i; ++j)
      if (modes[j].k == md.k) throw InvalidSpecError("duplicate mode");
  }
  field_ = TrigPolynomial(model.dim(), std::move(modes));
  const double norm = field_.l2_norm_sq();
  if (std::fabs(norm - 1.0) > 1e-10)
    throw InvalidSpecError("eigenfunction is not L2-normalized (norm^2 = " +
                           std::to_string(norm) + ")");
}

double EigenfunctionSpec::lambda() const { return kTwoPi * kTwoPi * double(m_); }

EigenfunctionSpec EigenfunctionSpec::translated(const Vec& tau) const {
  std::vector<Mode> out = field_.modes();
  for (auto& md : out) {
    const double ph = kTwoPi * mode_phase(md.k, tau, dim());
    const double c = std::cos(ph), s = std::sin(ph);
    const double a = md.a, b = md.b;
    md.a = a * c - b * s;
    md.b = a * s + b * c;
  }
  return EigenfunctionSpec(model_, m_, std::move(out), seed_);
}

std::vector<ModeVector> enumerate_lattice(long m, int n) {
  if (m < 1) throw RangeError("m must be >= 1");
  if (n != 2 && n != 3) throw RangeError("dimension must be 2 or 3");
  const int b = static_cast<int>(detail::isqrt_ceil(m));
  std::vector<ModeVector> out;
  ModeVector v;
  v.dim = n;
  if (n == 2) {
    for (int i = 0; i <= b; ++i)
      for (int j = -b; j <= b; ++j) {
        v.k = {i, j, 0};
        if (v.norm2() == m && v.is_canonical()) out.push_back(v);
      }
  } else {
    for (int i = 0; i <= b; ++i)
      for (int j = -b; j <= b; ++j)
        for (int l = -b; l <= b; ++l) {
          v.k = {i, j, l};
          if (v.norm2() == m && v.is_canonical()) out.push_back(v);
        }
  }
  std::sort(out.begin(), out.end());
  return out;
}

EigenfunctionSpec random_eigenfunction(long m, const TorusModel& model, std::uint64_t seed) {
  const auto lattice = enumerate_lattice(m, model.dim());
  if (lattice.empty()) throw NoModesError(m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Mode> modes;
  modes.reserve(lattice.size());
  double norm = 0.0;
  for (const auto& k : lattice) {
    Mode md{k, gauss(rng), gauss(rng)};
    norm += 0.5 * (md.a * md.a + md.b * md.b);
    modes.push_back(md);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& md : modes) {
    md.a *= scale;
    md.b *= scale;
  }
  return EigenfunctionSpec(model, m, std::move(modes), seed);
}

EigenfunctionSpec sine_mode(int k, const TorusModel& model) {
  if (k < 1) throw RangeError("sine mode frequency must be >= 1");
  Mode md;
  md.k.dim = model.dim();
  md.k.k = {k, 0, 0};
  md.b = std::numbers::sqrt2;
  return EigenfunctionSpec(model, long(k) * k, {md});
}

EigenfunctionSpec product_mode() {
  // 2 sin(2 pi x) sin(2 pi y) = cos(2 pi (x - y)) - cos(2 pi (x + y)).
  Mode minus{ModeVector{{1, -1, 0}, 2}, 1.0, 0.0};
  Mode plus{ModeVector{{1, 1, 0}, 2}, -1.0, 0.0};
  return EigenfunctionSpec(TorusModel(2), 2, {minus, plus});
}

double evaluate(const EigenfunctionSpec& spec, const Point& x) { return spec.field().value(x.vec()); }

Vec evaluate_gradient(const EigenfunctionSpec& spec, const Point& x) {
  return spec.field().gradient(x.vec());
}

double laplacian_residual(const EigenfunctionSpec& spec, const Point& x, double h) {
  if (!(h > 0.0) || h >= 1e-2) throw RangeError("stencil spacing must lie in (0, 1e-2)");
  const auto& f = spec.field();
  const Vec& c = x.vec();
  const double v0 = f.value(c);
  double lap = 0.0;
  for (int d = 0; d < spec.dim(); ++d) {
    Vec p = c, q = c;
    p[d] += h;
    q[d] -= h;
    lap += (f.value(p) + f.value(q) - 2.0 * v0) / (h * h);
  }
  return std::fabs(lap + spec.lambda() * v0);
}

int nyquist_resolution(long m) { return static_cast<int>(2 * detail::isqrt_ceil(m) + 2); }

}  // namespace nodalscope
