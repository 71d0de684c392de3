#pragma once

#include <array>
#include <string>

#include "strebel/cpoly.hpp"
#include "strebel/sphere_point.hpp"

namespace strebel {

/// z -> (m11 z + m12) / (m21 z + m22), stored up to scale with the
/// largest-magnitude entry of modulus one.
class MobiusMap {
 public:
  /// Throws DomainError when the determinant vanishes.
  MobiusMap(Complex m11, Complex m12, Complex m21, Complex m22, std::string tag = {});

  static MobiusMap identity();

  const std::array<Complex, 4>& entries() const { return m_; }
  const std::string& tag() const { return tag_; }
  Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  SpherePoint operator()(const SpherePoint& z) const;
  /// M'(z) = det / (m21 z + m22)^2.
  Complex derivative(Complex z) const;

  /// The map as a rational function (m11 z + m12)/(m21 z + m22).
  RationalFn as_rational() const;

  /// Equality up to a nonzero complex scalar.
  bool projectively_equal(const MobiusMap& other, double tol = 1e-12) const;

 private:
  std::array<Complex, 4> m_;
  std::string tag_;
};

SpherePoint apply(const MobiusMap& M, const SpherePoint& z);
MobiusMap inverse(const MobiusMap& M);
/// M after N: apply(compose(M,N), z) == apply(M, apply(N, z)).
MobiusMap compose(const MobiusMap& M, const MobiusMap& N);

/// ((a+bi)/(2a)) (z-a)/(z-bi): sends a, -a, bi, -bi to 0, 1, inf, 1/2 + (b/a - a/b) i/4.
MobiusMap build_phi(double a, double b);

/// h(z) = (z-1)/z, the order-3 symmetry of q1.
MobiusMap build_h();

}  // namespace strebel
