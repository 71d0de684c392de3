#pragma once

#include <complex>
#include <optional>

namespace strebel {

using Complex = std::complex<double>;

/// A point of the Riemann sphere. Infinity is its own state, never a large float.
class SpherePoint {
 public:
  SpherePoint(Complex z) : value_(z) {}  // NOLINT: implicit from finite values
  SpherePoint(double x) : value_(Complex(x, 0.0)) {}  // NOLINT

  static SpherePoint infinity() { return SpherePoint(); }

  bool is_infinity() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  /// The finite value; throws DomainError at infinity.
  Complex value() const;

  friend bool operator==(const SpherePoint& a, const SpherePoint& b) = default;

 private:
  SpherePoint() = default;
  std::optional<Complex> value_;
};

/// Chordal distance on the unit-diameter-2 sphere: 2|a-b| / sqrt((1+|a|^2)(1+|b|^2)).
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

/// Strict weak order: finite points by (re, im), infinity last.
bool canonical_less(const SpherePoint& a, const SpherePoint& b);

}  // namespace strebel
