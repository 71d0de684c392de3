#include "strebel/mobius.hpp"

#include <algorithm>
#include <cmath>

#include "strebel/errors.hpp"

namespace strebel {

MobiusMap::MobiusMap(Complex m11, Complex m12, Complex m21, Complex m22, std::string tag)
    : m_{m11, m12, m21, m22}, tag_(std::move(tag)) {
  double biggest = 0.0;
  for (const auto& e : m_) biggest = std::max(biggest, std::abs(e));
  if (!(biggest > 0.0) || !std::isfinite(biggest)) throw DomainError("degenerate Mobius matrix");
  Complex scale = 0.0;
  for (const auto& e : m_) {
    if (std::abs(e) == biggest) {
      scale = e;
      break;
    }
  }
  for (auto& e : m_) e /= scale;
  if (std::abs(det()) <= 1e-14) throw DomainError("Mobius matrix has zero determinant");
}

MobiusMap MobiusMap::identity() { return MobiusMap(1.0, 0.0, 0.0, 1.0, "identity"); }

SpherePoint MobiusMap::operator()(const SpherePoint& z) const {
  const auto& [a, b, c, d] = m_;
  if (z.is_infinity()) {
    if (c == Complex(0.0)) return SpherePoint::infinity();
    return a / c;
  }
  const Complex x = z.value();
  const Complex num = a * x + b;
  const Complex den = c * x + d;
  const double den_scale = std::abs(c * x) + std::abs(d);
  if (std::abs(den) <= 1e-14 * den_scale) return SpherePoint::infinity();
  return num / den;
}

Complex MobiusMap::derivative(Complex z) const {
  const Complex den = m_[2] * z + m_[3];
  return det() / (den * den);
}

RationalFn MobiusMap::as_rational() const {
  return RationalFn::coprime(Poly{m_[1], m_[0]}, Poly{m_[3], m_[2]});
}

bool MobiusMap::projectively_equal(const MobiusMap& other, double tol) const {
  // Entries are normalized with a unit-modulus pivot; compare after aligning
  // the phase on the largest entry of *this.
  size_t pivot = 0;
  for (size_t k = 1; k < 4; ++k) {
    if (std::abs(m_[k]) > std::abs(m_[pivot])) pivot = k;
  }
  if (std::abs(other.m_[pivot]) == 0.0) return false;
  const Complex ratio = m_[pivot] / other.m_[pivot];
  for (size_t k = 0; k < 4; ++k) {
    if (std::abs(m_[k] - ratio * other.m_[k]) > tol) return false;
  }
  return true;
}

SpherePoint apply(const MobiusMap& M, const SpherePoint& z) { return M(z); }

MobiusMap inverse(const MobiusMap& M) {
  const auto& [a, b, c, d] = M.entries();
  return MobiusMap(d, -b, -c, a);
}

MobiusMap compose(const MobiusMap& M, const MobiusMap& N) {
  const auto& [a, b, c, d] = M.entries();
  const auto& [e, f, g, h] = N.entries();
  return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h);
}

MobiusMap build_phi(double a, double b) {
  if (a == 0.0 || b == 0.0) throw DomainError("build_phi requires a != 0 and b != 0");
  const Complex i(0.0, 1.0);
  const Complex apb = Complex(a, b);
  return MobiusMap(apb, -a * apb, 2.0 * a, -2.0 * a * b * i, "phi");
}

MobiusMap build_h() { return MobiusMap(1.0, -1.0, 1.0, 0.0, "h"); }

}  // namespace strebel
