#include "nodalscope/fields.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "nodalscope/errors.hpp"
#include "nodalscope/parallel.hpp"
#include "scan.hpp"
#include "trig_kernel.hpp"

namespace nodalscope {

using detail::kTwoPi;

namespace {

void check_radius(double r) {
  if (!(r > 0.0)) throw RangeError("ball radius must be positive");
  if (r > 0.5) throw EmbeddedBallError("ball radius exceeds the injectivity radius 1/2");
}

int frequency_cutoff(const TrigPolynomial& f) {
  return static_cast<int>(2 * std::ceil(f.max_frequency() - 1e-12) + 2);
}

}  // namespace

std::size_t SampledField::index(int i, int j, int l) const {
  const int n = resolution;
  auto w = [n](int v) { return static_cast<std::size_t>(((v % n) + n) % n); };
  std::size_t idx = w(i) * n + w(j);
  if (dim == 3) idx = idx * n + w(l);
  return idx;
}

SampledField sample(const TrigPolynomial& field, int resolution, bool with_gradient) {
  const int required = frequency_cutoff(field);
  if (resolution < required) throw ResolutionError(resolution, required);
  SampledField out;
  out.dim = field.dim();
  out.resolution = resolution;
  const std::size_t n = resolution;
  const std::size_t per_row = field.dim() == 3 ? n * n : n;
  out.values.assign(n * per_row, 0.0);
  if (with_gradient) out.gradient.assign(n * per_row * field.dim(), 0.0);
  const double h = 1.0 / resolution;
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t r = 0; r < per_row; ++r) {
      Vec x{};
      x[0] = static_cast<double>(i) * h;
      if (field.dim() == 2) {
        x[1] = static_cast<double>(r) * h;
      } else {
        x[1] = static_cast<double>(r / n) * h;
        x[2] = static_cast<double>(r % n) * h;
      }
      const std::size_t node = i * per_row + r;
      if (with_gradient) {
        Vec g;
        field.value_gradient(x, out.values[node], g);
        for (int d = 0; d < field.dim(); ++d) out.gradient[node * field.dim() + d] = g[d];
      } else {
        out.values[node] = field.value(x);
      }
    }
  });
  return out;
}

SampledField sample(const EigenfunctionSpec& spec, int resolution, bool with_gradient) {
  const int required = nyquist_resolution(spec.m());
  if (resolution < required) throw ResolutionError(resolution, required);
  return sample(spec.field(), resolution, with_gradient);
}

double ball_indicator_transform(double freq, double r, int n) {
  const double pi = std::numbers::pi;
  if (n == 2) {
    if (freq == 0.0) return pi * r * r;
    return r * std::cyl_bessel_j(1.0, kTwoPi * freq * r) / freq;
  }
  if (n == 3) {
    if (freq == 0.0) return 4.0 / 3.0 * pi * r * r * r;
    const double t = kTwoPi * freq * r;
    double num;
    if (t < 1.0) {
      // sin t - t cos t = sum_{k>=1} (-1)^{k+1} 2k t^{2k+1} / (2k+1)!
      num = 0.0;
      double term = t;  // t^{2k+1}/(2k+1)! at k = 0
      for (int k = 1; k <= 12; ++k) {
        term *= t * t / ((2.0 * k) * (2.0 * k + 1.0));
        num += (k % 2 ? 1.0 : -1.0) * 2.0 * k * term;
      }
    } else {
      num = std::sin(t) - t * std::cos(t);
    }
    return num / (2.0 * pi * pi * freq * freq * freq);
  }
  throw RangeError("ball transform: dimension must be 2 or 3");
}

namespace {

struct Term {
  std::array<int, 3> xi{};
  std::complex<double> w;
  double freq = 0.0;
};

// psi = Re sum_j C_j e^{i theta_j}, C_j = a_j - i b_j, and
// Re(A) Re(B) = (Re(AB) + Re(A conj B)) / 2.
std::vector<Term> square_terms(const TrigPolynomial& f) {
  const int dim = f.dim();
  std::map<std::array<int, 3>, std::complex<double>> acc;
  auto push = [&](std::array<int, 3> xi, std::complex<double> w) {
    ModeVector v{xi, dim};
    if (!v.is_zero() && !v.is_canonical()) {
      for (auto& c : xi) c = -c;
      w = std::conj(w);
    }
    acc[xi] += w;
  };
  const auto& modes = f.modes();
  for (const auto& mj : modes) {
    const std::complex<double> cj(mj.a, mj.k.is_zero() ? 0.0 : -mj.b);
    for (const auto& ml : modes) {
      const std::complex<double> cl(ml.a, ml.k.is_zero() ? 0.0 : -ml.b);
      std::array<int, 3> s{}, d{};
      for (int e = 0; e < 3; ++e) {
        s[e] = mj.k.k[e] + ml.k.k[e];
        d[e] = mj.k.k[e] - ml.k.k[e];
      }
      push(s, 0.5 * cj * cl);
      push(d, 0.5 * cj * std::conj(cl));
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [xi, w] : acc) {
    if (w == std::complex<double>(0.0, 0.0)) continue;
    double f2 = 0.0;
    for (int e = 0; e < dim; ++e) f2 += double(xi[e]) * xi[e];
    out.push_back({xi, w, std::sqrt(f2)});
  }
  return out;
}

double mass_from_terms(const std::vector<Term>& terms, int dim, const Vec& c, double r) {
  double s = 0.0;
  for (const auto& t : terms) {
    double ph = 0.0;
    for (int e = 0; e < dim; ++e) ph += t.xi[e] * c[e];
    ph = kTwoPi * (ph - std::floor(ph));
    s += (t.w.real() * std::cos(ph) - t.w.imag() * std::sin(ph)) *
         ball_indicator_transform(t.freq, r, dim);
  }
  return s;
}

}  // namespace

BallProbe::BallProbe(const EigenfunctionSpec& spec, ProbeOptions options)
    : BallProbe(spec.field(), spec.lambda(), options) {}

BallProbe::BallProbe(TrigPolynomial field, double lambda, ProbeOptions options)
    : field_(std::move(field)), lambda_(lambda), options_(options) {
  if (!(options_.tol > 0.0)) throw RangeError("tolerance must be positive");
  if (options_.tol < 1e-12) throw BudgetError("tolerance below 1e-12 cannot be certified");
  if (!(options_.points_per_wavelength >= 2.0))
    throw RangeError("points_per_wavelength must be at least 2");
  build();
}

void BallProbe::build() {
  const int dim = field_.dim();
  const int cutoff = frequency_cutoff(field_);
  const int want = std::max({cutoff, 16,
      static_cast<int>(std::ceil(options_.points_per_wavelength * field_.max_frequency()))});
  int n = 16;
  while (n < want) n *= 2;
  n = std::min(n, dim == 2 ? 2048 : 128);
  n = std::max(n, cutoff);
  SampledField s = sample(field_, n, true);
  q_grid_.resize(s.values.size());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    double g2 = 0.0;
    for (int d = 0; d < dim; ++d) g2 += s.gradient[i * dim + d] * s.gradient[i * dim + d];
    q_grid_[i] = g2 + 0.5 * lambda_ * s.values[i] * s.values[i];
  }
  s.gradient.clear();
  s.gradient.shrink_to_fit();
  grid_ = std::move(s);

  mass_terms_.clear();
  for (const auto& t : square_terms(field_))
    mass_terms_.push_back({t.xi, t.w.real(), t.w.imag(), t.freq});
}

double BallProbe::channel_value(Channel ch, const Vec& x) const {
  if (ch == Channel::PsiSq) {
    const double v = field_.value(x);
    return v * v;
  }
  double v;
  Vec g;
  field_.value_gradient(x, v, g);
  double g2 = 0.0;
  for (int d = 0; d < dim(); ++d) g2 += g[d] * g[d];
  return ch == Channel::Q ? g2 + 0.5 * lambda_ * v * v : g2;
}

namespace {

detail::ScanObjective channel_objective(Channel ch, const TrigPolynomial& f, double lambda,
                                        const SampledField& grid, const std::vector<double>& q) {
  detail::ScanObjective obj;
  const int dim = f.dim();
  switch (ch) {
    case Channel::PsiSq:
      obj.node_value = [&grid](std::size_t i, const Vec&) {
        return grid.values[i] * grid.values[i];
      };
      obj.eval = [&f, dim](const Vec& y, const Vec&, Vec* grad) {
        if (!grad) {
          const double v = f.value(y);
          return v * v;
        }
        double v;
        Vec g;
        f.value_gradient(y, v, g);
        for (int d = 0; d < dim; ++d) (*grad)[d] = 2.0 * v * g[d];
        return v * v;
      };
      break;
    case Channel::Q:
    case Channel::GradSq: {
      const double w = ch == Channel::Q ? 0.5 * lambda : 0.0;
      obj.node_value = [&grid, &q, ch, lambda](std::size_t i, const Vec&) {
        if (ch == Channel::Q) return q[i];
        return std::max(0.0, q[i] - 0.5 * lambda * grid.values[i] * grid.values[i]);
      };
      obj.eval = [&f, dim, w](const Vec& y, const Vec&, Vec* grad) {
        const Jet j = f.jet(y);
        double g2 = 0.0;
        for (int d = 0; d < dim; ++d) g2 += j.grad[d] * j.grad[d];
        if (grad) {
          for (int d = 0; d < dim; ++d) {
            double hg = 0.0;
            for (int e = 0; e < dim; ++e) hg += j.hess[d][e] * j.grad[e];
            (*grad)[d] = 2.0 * hg + 2.0 * w * j.value * j.grad[d];
          }
        }
        return g2 + w * j.value * j.value;
      };
      break;
    }
  }
  return obj;
}

}  // namespace

SupResult BallProbe::sup(Channel ch, const Vec& center, double r_out, double r_in) const {
  check_radius(r_out);
  if (r_in < 0.0 || r_in > r_out) throw RangeError("annulus radii must satisfy 0 <= r_in <= r_out");
  detail::Region reg{center, r_out, r_in, false};
  const double h = 1.0 / grid_.resolution;
  const double mf = field_.max_frequency();
  const double deficit = 2.0 * std::numbers::pi * std::numbers::pi * dim() * mf * mf * h * h;
  return detail::scan_sup(reg, channel_objective(ch, field_, lambda_, grid_, q_grid_), dim(),
                          grid_.resolution, options_, deficit);
}

SupResult BallProbe::global_sup(Channel ch) const {
  detail::Region reg;
  reg.whole = true;
  const double h = 1.0 / grid_.resolution;
  const double mf = field_.max_frequency();
  const double deficit = 2.0 * std::numbers::pi * std::numbers::pi * dim() * mf * mf * h * h;
  return detail::scan_sup(reg, channel_objective(ch, field_, lambda_, grid_, q_grid_), dim(),
                          grid_.resolution, options_, deficit);
}

SupResult BallProbe::weighted_psi_sq_sup(const Vec& center, double r, const WeightFn& weight) const {
  check_radius(r);
  detail::ScanObjective obj;
  const int n = dim();
  obj.node_value = [this, &weight](std::size_t i, const Vec& o) {
    return weight(o, nullptr) * grid_.values[i] * grid_.values[i];
  };
  obj.eval = [this, &weight, n](const Vec& y, const Vec& o, Vec* grad) {
    if (!grad) {
      const double v = field_.value(y);
      return weight(o, nullptr) * v * v;
    }
    double v;
    Vec g;
    field_.value_gradient(y, v, g);
    Vec wg{};
    const double w = weight(o, &wg);
    for (int d = 0; d < n; ++d) (*grad)[d] = wg[d] * v * v + 2.0 * w * v * g[d];
    return w * v * v;
  };
  const double h = 1.0 / grid_.resolution;
  const double mf = field_.max_frequency();
  const double deficit = 2.0 * std::numbers::pi * std::numbers::pi * n * mf * mf * h * h;
  return detail::scan_sup({center, r, 0.0, false}, obj, n, grid_.resolution, options_, deficit);
}

double BallProbe::mass(const Vec& center, double r) const {
  check_radius(r);
  double s = 0.0;
  const int n = dim();
  for (const auto& t : mass_terms_) {
    double ph = 0.0;
    for (int e = 0; e < n; ++e) ph += t.xi[e] * center[e];
    ph = kTwoPi * (ph - std::floor(ph));
    s += (t.re * std::cos(ph) - t.im * std::sin(ph)) * ball_indicator_transform(t.freq, r, n);
  }
  return s;
}

std::vector<double> BallProbe::mass_on_grid(double r, int per_axis) const {
  check_radius(r);
  if (per_axis < 1) throw RangeError("per_axis must be positive");
  const int n = dim();
  const std::size_t p = per_axis;
  std::vector<std::complex<double>> table(p);
  for (std::size_t i = 0; i < p; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / per_axis;
    table[i] = {std::cos(th), std::sin(th)};
  }
  struct Prepared {
    std::complex<double> w;
    int xi[3];
  };
  std::vector<Prepared> prep;
  prep.reserve(mass_terms_.size());
  for (const auto& t : mass_terms_) {
    Prepared q;
    q.w = std::complex<double>(t.re, t.im) * ball_indicator_transform(t.freq, r, n);
    for (int e = 0; e < 3; ++e) q.xi[e] = ((t.xi[e] % per_axis) + per_axis) % per_axis;
    prep.push_back(q);
  }
  const std::size_t rows = p;
  const std::size_t per_row = n == 3 ? p * p : p;
  std::vector<double> out(rows * per_row, 0.0);
  parallel_for(rows, [&](std::size_t i) {
    for (const auto& q : prep) {
      const std::complex<double> wi = q.w * table[(q.xi[0] * i) % p];
      if (n == 2) {
        for (std::size_t j = 0; j < p; ++j)
          out[i * per_row + j] += (wi * table[(q.xi[1] * j) % p]).real();
      } else {
        for (std::size_t j = 0; j < p; ++j) {
          const std::complex<double> wj = wi * table[(q.xi[1] * j) % p];
          double* row = &out[i * per_row + j * p];
          for (std::size_t l = 0; l < p; ++l) row[l] += (wj * table[(q.xi[2] * l) % p]).real();
        }
      }
    }
  });
  return out;
}

double BallProbe::mass_error_bound() const {
  double s = 0.0;
  for (const auto& t : mass_terms_) s += std::hypot(t.re, t.im);
  return 64.0 * DBL_EPSILON * std::max(s, 1.0);
}

BallStat BallProbe::ball_stat(const Point& center, double r) const {
  BallStat b;
  b.center = center;
  b.radius = r;
  const SupResult s = sup(Channel::PsiSq, center.vec(), r);
  b.sup_sq = s.value;
  b.mass = mass(center.vec(), r);
  b.error_bound = mass_error_bound() + s.scan_deficit * s.value;
  return b;
}

double sup_on_ball(const EigenfunctionSpec& spec, const Point& center, double s, double tol) {
  ProbeOptions o;
  o.tol = tol;
  return BallProbe(spec, o).sup(Channel::PsiSq, center.vec(), s).value;
}

double q_on_ball(const EigenfunctionSpec& spec, const Point& center, double s, double lambda,
                 double tol) {
  ProbeOptions o;
  o.tol = tol;
  return BallProbe(spec.field(), lambda, o).sup(Channel::Q, center.vec(), s).value;
}

double l2_on_ball(const TrigPolynomial& field, const Point& center, double r) {
  check_radius(r);
  return mass_from_terms(square_terms(field), field.dim(), center.vec(), r);
}

double l2_on_ball(const EigenfunctionSpec& spec, const Point& center, double r, double tol) {
  if (!(tol > 0.0)) throw RangeError("tolerance must be positive");
  if (tol < 1e-12) throw BudgetError("tolerance below 1e-12 cannot be certified");
  return l2_on_ball(spec.field(), center, r);
}

double l2_on_ball_quadrature(const TrigPolynomial& field, const Point& center, double r,
                             double h) {
  check_radius(r);
  if (!(h > 0.0) || h > r) throw RangeError("quadrature spacing must lie in (0, r]");
  const int n = field.dim();
  const Vec& c = center.vec();
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int d = 0; d < n; ++d) {
    lo[d] = static_cast<int>(std::floor((c[d] - r) / h));
    hi[d] = static_cast<int>(std::floor((c[d] + r) / h));
  }
  const double r2 = r * r;
  const double cell = std::pow(h, n);
  const int sub = 4;
  const double sub_cell = cell / std::pow(sub, n);
  double total = 0.0;
  for (int i = lo[0]; i <= hi[0]; ++i)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int l = lo[2]; l <= hi[2]; ++l) {
        const int idx[3] = {i, j, l};
        double near = 0.0, far = 0.0;
        Vec mid{};
        for (int d = 0; d < n; ++d) {
          const double a = idx[d] * h - c[d], b = a + h;
          const double nd = a > 0 ? a : (b < 0 ? -b : 0.0);
          const double fd = std::max(std::fabs(a), std::fabs(b));
          near += nd * nd;
          far += fd * fd;
          mid[d] = c[d] + a + 0.5 * h;
        }
        if (near > r2) continue;
        if (far <= r2) {
          const double v = field.value(mid);
          total += v * v * cell;
          continue;
        }
        const int m3 = n == 3 ? sub : 1;
        for (int p = 0; p < sub; ++p)
          for (int q = 0; q < sub; ++q)
            for (int s = 0; s < m3; ++s) {
              const int sidx[3] = {p, q, s};
              Vec y{};
              double d2 = 0.0;
              for (int d = 0; d < n; ++d) {
                const double o = idx[d] * h - c[d] + (sidx[d] + 0.5) * h / sub;
                y[d] = c[d] + o;
                d2 += o * o;
              }
              if (d2 > r2) continue;
              const double v = field.value(y);
              total += v * v * sub_cell;
            }
      }
  return total;
}

}  // namespace nodalscope
