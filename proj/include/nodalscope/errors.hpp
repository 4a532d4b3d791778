#pragma once

#include <stdexcept>
#include <string>

namespace nodalscope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A geodesic ball of the requested radius is not embedded in the torus.
class EmbeddedBallError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter lies outside the operation's admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The squared lattice norm m has no representation as a sum of n squares.
class NoModesError : public Error {
 public:
  explicit NoModesError(long m)
      : Error("no lattice modes with |k|^2 = " + std::to_string(m)), m_(m) {}
  long m() const { return m_; }

 private:
  long m_;
};

/// Grid resolution below the sampling bound of the field.
class ResolutionError : public Error {
 public:
  ResolutionError(int requested, int required)
      : Error("grid resolution " + std::to_string(requested) +
              " below required " + std::to_string(required)),
        required_(required) {}
  int required() const { return required_; }

 private:
  int required_;
};

/// Requested accuracy cannot be met within the scan budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A ball sup that should be positive vanished; ratios would be meaningless.
class DegenerateBallError : public Error {
 public:
  using Error::Error;
};

/// Log-log slope too close to a half-integer boundary to round reliably.
class AmbiguousOrderError : public Error {
 public:
  explicit AmbiguousOrderError(double slope)
      : Error("ambiguous vanishing order, raw slope " + std::to_string(slope)),
        slope_(slope) {}
  double slope() const { return slope_; }

 private:
  double slope_;
};

/// The bounds report was requested for a field whose certificate failed.
class ConditionalHypothesisError : public Error {
 public:
  using Error::Error;
};

/// Malformed eigenfunction description (bad norm, non-canonical mode, ...).
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace nodalscope
