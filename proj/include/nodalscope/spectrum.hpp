#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nodalscope/geometry.hpp"

namespace nodalscope {

/// Integer frequency vector. Canonical form: first nonzero entry positive.
struct ModeVector {
  std::array<int, 3> k{};
  int dim = 2;

  long norm2() const;
  bool is_zero() const;
  bool is_canonical() const;

  friend bool operator==(const ModeVector&, const ModeVector&) = default;
  friend auto operator<=>(const ModeVector&, const ModeVector&) = default;
};

/// One real Fourier term a cos(2 pi k.x) + b sin(2 pi k.x).
struct Mode {
  ModeVector k;
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Value, gradient and Hessian of a field at one point.
struct Jet {
  double value = 0.0;
  Vec grad{};
  std::array<Vec, 3> hess{};
};

/// Real trigonometric polynomial on the unit torus.
///
/// This is the evaluation engine shared by eigenfunctions and test fields
/// (a k = 0 term is allowed and represents a constant).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(int dim, std::vector<Mode> modes);

  static TrigPolynomial constant(int dim, double value);

  int dim() const { return dim_; }
  const std::vector<Mode>& modes() const { return modes_; }

  /// max |k| over the terms.
  double max_frequency() const;
  /// sum |a| + |b|, an upper bound for sup |f|.
  double coefficient_l1() const;
  /// Exact L^2 norm squared over the torus.
  double l2_norm_sq() const;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  void value_gradient(const Vec& x, double& v, Vec& g) const;
  Jet jet(const Vec& x) const;

 private:
  int dim_ = 2;
  std::vector<Mode> modes_;
};

/// Exact toral eigenfunction with eigenvalue lambda = 4 pi^2 m.
class EigenfunctionSpec {
 public:
  /// Validates |k|^2 = m and canonical form for each mode and unit L^2 norm.
  EigenfunctionSpec(TorusModel model, long m, std::vector<Mode> modes,
                    std::optional<std::uint64_t> seed = std::nullopt);

  const TorusModel& model() const { return model_; }
  int dim() const { return model_.dim(); }
  long m() const { return m_; }
  double lambda() const;
  const std::vector<Mode>& modes() const { return field_.modes(); }
  const std::optional<std::uint64_t>& seed() const { return seed_; }
  const TrigPolynomial& field() const { return field_; }

  /// Same function translated by tau: x -> psi(x - tau).
  EigenfunctionSpec translated(const Vec& tau) const;

  friend bool operator==(const EigenfunctionSpec& a, const EigenfunctionSpec& b) {
    return a.model_ == b.model_ && a.m_ == b.m_ && a.seed_ == b.seed_ &&
           a.field_.modes() == b.field_.modes();
  }

 private:
  TorusModel model_;
  long m_;
  std::optional<std::uint64_t> seed_;
  TrigPolynomial field_;
};

/// All canonical k in Z^n with |k|^2 = m, in ascending lexicographic order.
std::vector<ModeVector> enumerate_lattice(long m, int n);

/// Gaussian random combination of the modes of |k|^2 = m, rescaled to unit norm.
EigenfunctionSpec random_eigenfunction(long m, const TorusModel& model, std::uint64_t seed);

/// sqrt(2) sin(2 pi k x_1): mode (k, 0[, 0]) with b = sqrt 2.
EigenfunctionSpec sine_mode(int k, const TorusModel& model = TorusModel(2));

/// 2 sin(2 pi x) sin(2 pi y) on the 2-torus, written in the cos/sin basis.
EigenfunctionSpec product_mode();

double evaluate(const EigenfunctionSpec& spec, const Point& x);
Vec evaluate_gradient(const EigenfunctionSpec& spec, const Point& x);

/// |Delta_h psi(x) - lambda psi(x)| for the positive Laplacian Delta_h = -lap_h,
/// lap_h the (2n+1)-point stencil. Truncation error is at most
/// n h^2 lambda^2 coefficient_l1 / 12.
double laplacian_residual(const EigenfunctionSpec& spec, const Point& x, double h);

/// Nyquist-type bound 2 ceil(sqrt m) + 2 on grid points per axis.
int nyquist_resolution(long m);

}  // namespace nodalscope
