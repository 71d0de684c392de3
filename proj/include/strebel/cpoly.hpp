#pragma once

#include <complex>
#include <span>
#include <vector>

#include "strebel/sphere_point.hpp"

namespace strebel {

/// Dense polynomial with complex coefficients in ascending degree order.
///
/// The zero polynomial has no coefficients and degree -1. Exact zero leading
/// coefficients are dropped on construction, so degree() is always len-1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Complex> coeffs);
  Poly(std::initializer_list<Complex> coeffs) : Poly(std::vector<Complex>(coeffs)) {}

  static Poly constant(Complex c);
  static Poly monomial(int degree, Complex c = 1.0);
  /// lead * prod (z - r) over the given roots.
  static Poly from_roots(std::span<const Complex> roots, Complex lead = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const;
  Complex leading() const;

  Complex operator()(Complex z) const;
  /// Horner evaluation of sum |a_k| |z|^k, the scale of rounding error in operator().
  double magnitude_bound(Complex z) const;

  Poly derivative() const;
  /// Synthetic division by (z - r); the remainder is discarded.
  Poly deflate(Complex r) const;
  /// Coefficientwise absolute values; used for rounding-error bounds.
  Poly abs() const;
  double norm() const;

  /// Drops leading coefficients below `factor * eps * bound_k`, where bound
  /// is a coefficientwise error-scale polynomial produced alongside *this.
  Poly trimmed_against(const Poly& bound, double factor = 64.0) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(Complex s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, Complex s) { return a *= s; }
  friend Poly operator*(Complex s, Poly a) { return a *= s; }

  Poly pow(int n) const;

 private:
  std::vector<Complex> coeffs_;
};

struct Root {
  Complex z;
  int multiplicity = 1;
};

/// All roots of p with multiplicity (simultaneous Aberth-Ehrlich iteration).
/// Throws DomainError for constant or zero polynomials.
std::vector<Root> roots(const Poly& p);

/// Quotient num/den with den monic and no shared roots.
class RationalFn {
 public:
  RationalFn() : den_(Poly::constant(1.0)) {}
  /// Normalizes: cancels common roots, makes den monic. Throws on den == 0.
  RationalFn(Poly num, Poly den);
  explicit RationalFn(Poly p);

  /// Builds without root cancellation (den only made monic). For inputs known
  /// to be coprime, e.g. stored builtins.
  static RationalFn coprime(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  /// max(deg num, deg den): the degree as a map of the sphere.
  int map_degree() const;

  /// num(z)/den(z) with no pole check.
  Complex raw(Complex z) const { return num_(z) / den_(z); }

  friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
  friend RationalFn operator+(const RationalFn& a, const RationalFn& b);

 private:
  Poly num_;
  Poly den_;
};

/// Value of f at a point of the sphere; returns infinity at poles.
/// Throws IndeterminateError on 0/0 within tolerance.
SpherePoint rat_eval(const RationalFn& f, const SpherePoint& z);

RationalFn rat_derivative(const RationalFn& f);

/// Homogeneous substitution sum_k p_k P^k Q^(n-k), n = deg p, i.e. Q^n p(P/Q).
/// Leading coefficients that vanish up to rounding are trimmed.
Poly compose_homogeneous(const Poly& p, const Poly& P, const Poly& Q);

/// p(q(z)) for polynomials.
Poly compose(const Poly& p, const Poly& q);

}  // namespace strebel
