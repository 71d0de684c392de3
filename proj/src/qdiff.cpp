#include "strebel/qdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "strebel/errors.hpp"

namespace strebel {

namespace {

Poly reversed(const Poly& p) {
  std::vector<Complex> c = p.coeffs();
  std::reverse(c.begin(), c.end());
  return Poly(std::move(c));
}

Poly nth_derivative(Poly p, int n) {
  for (int k = 0; k < n; ++k) p = p.derivative();
  return p;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Complex leading_at(const RationalFn& f, Complex p, int order) {
  if (order >= 0) {
    return nth_derivative(f.num(), order)(p) / factorial(order) / f.den()(p);
  }
  const int m = -order;
  return f.num()(p) / (nth_derivative(f.den(), m)(p) / factorial(m));
}

}  // namespace

QuadDiff::QuadDiff(RationalFn f) : f_(std::move(f)) {
  if (f_.is_zero()) throw DomainError("quadratic differential must not vanish identically");
}

int QuadDiff::order_at_infinity() const {
  return f_.den().degree() - f_.num().degree() - 4;
}

std::vector<DivisorEntry> divisor(const QuadDiff& w) {
  std::vector<DivisorEntry> out;
  const auto& f = w.coefficient();
  if (f.num().degree() >= 1) {
    for (const auto& r : roots(f.num())) out.push_back({r.z, r.multiplicity});
  }
  if (f.den().degree() >= 1) {
    for (const auto& r : roots(f.den())) out.push_back({r.z, -r.multiplicity});
  }
  if (const int oi = w.order_at_infinity(); oi != 0) out.push_back({SpherePoint::infinity(), oi});
  std::sort(out.begin(), out.end(), [](const DivisorEntry& a, const DivisorEntry& b) {
    return canonical_less(a.point, b.point);
  });
  return out;
}

RationalFn chart_at_infinity(const RationalFn& f) {
  const int e = f.den().degree() - f.num().degree() - 4;
  Poly num = reversed(f.num());
  Poly den = reversed(f.den());
  if (e >= 0) {
    num = num * Poly::monomial(e);
  } else {
    den = den * Poly::monomial(-e);
  }
  return RationalFn::coprime(std::move(num), std::move(den));
}

LocalModel local_model(const QuadDiff& w, const DivisorEntry& e) {
  if (e.point.is_infinity()) {
    return {e.point, e.order, leading_at(chart_at_infinity(w.coefficient()), 0.0, e.order)};
  }
  return {e.point, e.order, leading_at(w.coefficient(), e.point.value(), e.order)};
}

PoleData pole_perimeter(const QuadDiff& w, const SpherePoint& p) {
  const auto div = divisor(w);
  const DivisorEntry* hit = nullptr;
  for (const auto& e : div) {
    if (chordal_distance(e.point, p) < 1e-8) hit = &e;
  }
  if (hit == nullptr || hit->order != -2) throw DomainError("point is not a double pole");
  const LocalModel lm = local_model(w, *hit);
  const Complex root = std::sqrt(-lm.leading);
  return {hit->point, lm.leading, root, 2.0 * std::numbers::pi * root.real()};
}

QuadDiff rational_pullback(const RationalFn& psi, const QuadDiff& w) {
  if (psi.map_degree() < 1) throw DomainError("pullback map must be nonconstant");
  const Poly& P = psi.num();
  const Poly& Q = psi.den();
  const Poly& N = w.coefficient().num();
  const Poly& D = w.coefficient().den();

  const Poly Nh = compose_homogeneous(N, P, Q);
  const Poly Dh = compose_homogeneous(D, P, Q);
  const Poly dP = P.derivative();
  const Poly dQ = Q.derivative();
  const Poly W = (dP * Q - P * dQ).trimmed_against(dP.abs() * Q.abs() + P.abs() * dQ.abs());

  // f(P/Q) (W/Q^2)^2 = Nh W^2 Q^(deg D - deg N - 4) / Dh
  const int e = D.degree() - N.degree() - 4;
  Poly num = Nh * W * W;
  Poly den = Dh;
  if (e >= 0) {
    num = num * Q.pow(e);
  } else {
    den = den * Q.pow(-e);
  }
  return QuadDiff(RationalFn(std::move(num), std::move(den)));
}

QuadDiff mobius_pullback(const MobiusMap& M, const QuadDiff& w) {
  return rational_pullback(M.as_rational(), w);
}

QuadDiff make_q1() {
  const double k = -1.0 / (std::numbers::pi * std::numbers::pi);
  return QuadDiff(RationalFn::coprime(Poly{k, -k, k}, Poly{0.0, 0.0, 1.0, -2.0, 1.0}));
}

QuadDiff make_four_pole_family(double a, double b) {
  if (a == 0.0 || b == 0.0) throw DomainError("family parameters must be nonzero");
  return QuadDiff(RationalFn::coprime(Poly{1.0}, Poly{-a * a * b * b, 0.0, b * b - a * a, 0.0, 1.0}));
}

}  // namespace strebel
