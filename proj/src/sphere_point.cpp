#include "strebel/sphere_point.hpp"

#include <cmath>

#include "strebel/errors.hpp"

namespace strebel {

Complex SpherePoint::value() const {
  if (!value_) throw DomainError("point at infinity has no finite value");
  return *value_;
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity() && b.is_infinity()) return 0.0;
  if (a.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
  if (b.is_infinity()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
  const Complex x = a.value();
  const Complex y = b.value();
  return 2.0 * std::abs(x - y) / std::sqrt((1.0 + std::norm(x)) * (1.0 + std::norm(y)));
}

bool canonical_less(const SpherePoint& a, const SpherePoint& b) {
  if (a.is_infinity()) return false;
  if (b.is_infinity()) return true;
  const Complex x = a.value();
  const Complex y = b.value();
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

}  // namespace strebel
