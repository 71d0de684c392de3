#pragma once

#include <vector>

#include "strebel/cpoly.hpp"
#include "strebel/mobius.hpp"
#include "strebel/sphere_point.hpp"

namespace strebel {

/// f(z) dz^2 on the sphere, f given in the affine chart.
class QuadDiff {
 public:
  /// Throws DomainError if f is identically zero.
  explicit QuadDiff(RationalFn f);

  const RationalFn& coefficient() const { return f_; }
  /// Order of vanishing at infinity: deg(den) - deg(num) - 4.
  int order_at_infinity() const;

 private:
  RationalFn f_;
};

struct DivisorEntry {
  SpherePoint point;
  int order = 0;  ///< negative for poles
};

/// Double-pole data. perimeter = 2 pi Re sqrt(-c_minus_2).
struct PoleData {
  SpherePoint point;
  Complex c_minus_2;
  Complex sqrt_neg_c;  ///< principal sqrt(-c_minus_2)
  double perimeter = 0.0;
};

/// Zeros and poles with orders, canonically ordered; orders sum to -4.
std::vector<DivisorEntry> divisor(const QuadDiff& w);

/// Throws DomainError unless p is a pole of order exactly 2.
PoleData pole_perimeter(const QuadDiff& w, const SpherePoint& p);

/// Coefficient of the differential in the w = 1/z chart: f(1/w) / w^4.
RationalFn chart_at_infinity(const RationalFn& f);

/// Leading behaviour f ~ leading * (x - p)^order in the chart centred at the
/// point (x = z - p for finite p, x = w = 1/z at infinity).
struct LocalModel {
  SpherePoint point;
  int order = 0;
  Complex leading;
};

LocalModel local_model(const QuadDiff& w, const DivisorEntry& e);

/// f(M(z)) M'(z)^2.
QuadDiff mobius_pullback(const MobiusMap& M, const QuadDiff& w);

/// f(psi(z)) psi'(z)^2 for a nonconstant rational map psi.
QuadDiff rational_pullback(const RationalFn& psi, const QuadDiff& w);

/// Order of the pullback at a point of ramification index e over a point of
/// order `order`: e (order + 2) - 2.
constexpr int pulled_back_order(int e, int order) { return e * (order + 2) - 2; }

/// Builtins.
QuadDiff make_q1();
/// dz^2 / ((z^2 - a^2)(z^2 + b^2)).
QuadDiff make_four_pole_family(double a, double b);

}  // namespace strebel
