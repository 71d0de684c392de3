#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "strebel/cpoly.hpp"
#include "strebel/errors.hpp"

using namespace strebel;

namespace {

const Complex I(0.0, 1.0);

// Greedy multiset match; returns the worst distance.
double match_distance(std::vector<Complex> expected, const std::vector<Root>& got) {
  std::vector<Complex> flat;
  for (const auto& r : got) {
    for (int k = 0; k < r.multiplicity; ++k) flat.push_back(r.z);
  }
  REQUIRE(flat.size() == expected.size());
  double worst = 0.0;
  for (const auto& z : flat) {
    auto it = std::min_element(expected.begin(), expected.end(), [&](Complex a, Complex b) {
      return std::abs(a - z) < std::abs(b - z);
    });
    worst = std::max(worst, std::abs(*it - z));
    expected.erase(it);
  }
  return worst;
}

Complex random_in_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Complex z(u(rng), u(rng));
    if (std::abs(z) < 1.0) return radius * z;
  }
}

}  // namespace

TEST_CASE("roots of z^2 + 1") {
  const auto r = roots(Poly{1.0, 0.0, 1.0});
  REQUIRE(r.size() == 2);
  CHECK(match_distance({I, -I}, r) < 1e-14);
  CHECK(r[0].multiplicity == 1);
}

TEST_CASE("roots of z^2 - z + 1 are the sixth roots of unity off the real axis") {
  const auto r = roots(Poly{1.0, -1.0, 1.0});
  const Complex z0(0.5, std::sqrt(3.0) / 2.0);
  CHECK(match_distance({z0, std::conj(z0)}, r) < 1e-14);
}

TEST_CASE("constant polynomial is rejected") {
  CHECK_THROWS_AS(roots(Poly{3.0}), DomainError);
  CHECK_THROWS_AS(roots(Poly{}), DomainError);
}

TEST_CASE("six random roots in the unit disc are recovered") {
  std::mt19937_64 rng(7);
  std::vector<Complex> rs;
  for (int k = 0; k < 6; ++k) rs.push_back(random_in_disc(rng, 1.0));
  const Poly p = Poly::from_roots(rs, Complex(0.3, -1.2));
  CHECK(match_distance(rs, roots(p)) < 1e-8);
}

TEST_CASE("roots then expand is the identity for separated random roots") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = deg(rng);
    std::vector<Complex> rs;
    while (static_cast<int>(rs.size()) < n) {
      const Complex z = random_in_disc(rng, 3.0);
      bool ok = true;
      for (const auto& r : rs) ok = ok && std::abs(r - z) > 0.05;
      if (ok) rs.push_back(z);
    }
    const Complex lead = random_in_disc(rng, 2.0) + 0.5;
    const Poly p = Poly::from_roots(rs, lead);
    const auto got = roots(p);
    CHECK(match_distance(rs, got) < 1e-8);

    // backward error of the reconstruction
    std::vector<Complex> flat;
    for (const auto& r : got) {
      for (int k = 0; k < r.multiplicity; ++k) flat.push_back(r.z);
    }
    const Poly back = Poly::from_roots(flat, p.leading());
    CHECK((back - p).norm() <= 1e-10 * p.norm());
  }
}

TEST_CASE("multiple roots are clustered with summed multiplicity") {
  const std::vector<Complex> rs{1.0, 1.0, -2.0, -2.0, -2.0, Complex(0.5, 0.5)};
  const auto got = roots(Poly::from_roots(rs));
  REQUIRE(got.size() == 3);
  int total = 0;
  for (const auto& r : got) {
    total += r.multiplicity;
    if (r.multiplicity == 2) CHECK(std::abs(r.z - 1.0) < 1e-10);
    if (r.multiplicity == 3) CHECK(std::abs(r.z + 2.0) < 1e-9);
    if (r.multiplicity == 1) CHECK(std::abs(r.z - Complex(0.5, 0.5)) < 1e-12);
  }
  CHECK(total == 6);
}

TEST_CASE("double roots of a squared quartic") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> rs;
    for (int k = 0; k < 4; ++k) rs.push_back(random_in_disc(rng, 2.0));
    const Poly q = Poly::from_roots(rs);
    const auto got = roots(q * q);
    REQUIRE(got.size() == 4);
    for (const auto& r : got) CHECK(r.multiplicity == 2);
    std::vector<Complex> doubled;
    for (const auto& r : rs) {
      doubled.push_back(r);
      doubled.push_back(r);
    }
    CHECK(match_distance(doubled, got) < 1e-9);
  }
}

TEST_CASE("exact zero roots are split off") {
  const auto got = roots(Poly{0.0, 0.0, 1.0, -2.0, 1.0});  // z^2 (1 - z)^2
  REQUIRE(got.size() == 2);
  CHECK(got[0].z == Complex(0.0));
  CHECK(got[0].multiplicity == 2);
  CHECK(std::abs(got[1].z - 1.0) < 1e-12);
  CHECK(got[1].multiplicity == 2);
}

TEST_CASE("rat_eval") {
  const RationalFn f(Poly{1.0}, Poly{-1.0, 0.0, 0.0, 0.0, 1.0});  // 1/((z^2-1)(z^2+1))
  const auto v = rat_eval(f, Complex(2.0));
  REQUIRE(v.is_finite());
  CHECK(std::abs(v.value() - 1.0 / 15.0) < 1e-15);

  SUBCASE("pole marker at a stored pole") {
    for (const auto& r : roots(f.den())) CHECK(rat_eval(f, r.z).is_infinity());
  }
  SUBCASE("q1 coefficient vanishes at its zero") {
    const double k = -1.0 / (M_PI * M_PI);
    const RationalFn q(Poly{k, -k, k}, Poly{0.0, 0.0, 1.0, -2.0, 1.0});
    const auto z = rat_eval(q, Complex(0.5, std::sqrt(3.0) / 2.0));
    REQUIRE(z.is_finite());
    CHECK(std::abs(z.value()) < 1e-15);
  }
  SUBCASE("0/0 is indeterminate") {
    const auto g = RationalFn::coprime(Poly{-1.0, 1.0}, Poly{-1.0, 1.0});
    CHECK_THROWS_AS(rat_eval(g, Complex(1.0)), IndeterminateError);
  }
  SUBCASE("value at infinity") {
    CHECK(std::abs(rat_eval(f, SpherePoint::infinity()).value()) == 0.0);
    CHECK(rat_eval(RationalFn(Poly{0.0, 1.0}), SpherePoint::infinity()).is_infinity());
  }
}

TEST_CASE("rat_derivative") {
  SUBCASE("constant") { CHECK(rat_derivative(RationalFn(Poly{4.0})).is_zero()); }
  SUBCASE("quartic with symbolic coefficients") {
    const Complex c0(0.2, 1.0), c1(-1.5, 0.5), c2(3.0, 0.0), c3(0.0, -2.0);
    const auto d = rat_derivative(RationalFn(Poly{c0, c1, c2, c3, 1.0}));
    REQUIRE(d.den().degree() == 0);
    const Poly expected{c1, 2.0 * c2, 3.0 * c3, 4.0};
    CHECK((d.num() - expected).norm() < 1e-15);
  }
  SUBCASE("h(z) = (z-1)/z has derivative 1/z^2") {
    const auto d = rat_derivative(RationalFn(Poly{-1.0, 1.0}, Poly{0.0, 1.0}));
    CHECK(d.num().degree() == 0);
    CHECK(std::abs(d.num().leading() - 1.0) < 1e-15);
    CHECK(d.den().degree() == 2);
    CHECK(std::abs(d.den().coeff(0)) == 0.0);
    CHECK(std::abs(d.den().coeff(1)) == 0.0);
  }
}

TEST_CASE("product rule holds pointwise") {
  std::mt19937_64 rng(5);
  const RationalFn f(Poly{Complex(1, 2), 0.5, Complex(0, -1)}, Poly{Complex(2, 1), -1.0, 1.0});
  const RationalFn g(Poly{0.3, Complex(1, 1), 0.0, 2.0}, Poly{Complex(-1, 0.5), 0.0, 1.0});
  const auto fg = rat_derivative(f * g);
  const auto df = rat_derivative(f);
  const auto dg = rat_derivative(g);
  for (int k = 0; k < 20; ++k) {
    const Complex z = random_in_disc(rng, 2.0);
    const Complex lhs = fg.raw(z);
    const Complex rhs = f.raw(z) * dg.raw(z) + df.raw(z) * g.raw(z);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("normalization cancels common roots and is idempotent") {
  const Poly num = Poly::from_roots(std::vector<Complex>{1.0, 2.0}, 3.0);
  const Poly den = Poly::from_roots(std::vector<Complex>{1.0, Complex(-3.0, 1.0)}, 2.0);
  const RationalFn f(num, den);
  CHECK(f.num().degree() == 1);
  CHECK(f.den().degree() == 1);
  CHECK(f.den().leading() == Complex(1.0));
  CHECK(std::abs(f.raw(0.25) - num(0.25) / den(0.25)) < 1e-14);

  const RationalFn again(f.num(), f.den());
  CHECK(again.num().coeffs() == f.num().coeffs());
  CHECK(again.den().coeffs() == f.den().coeffs());
}

TEST_CASE("homogeneous composition trims rounding-level leading terms") {
  // D(z) = z^2 + 1 composed with z -> (i z + 1)/(z - i): Q^2 D(P/Q) = (iz+1)^2 + (z-i)^2
  // whose z^2 coefficient -1 + 1 cancels exactly in exact arithmetic.
  const Complex i = I;
  const Poly P{1.0, i};
  const Poly Q{-i, 1.0};
  const Poly r = compose_homogeneous(Poly{1.0, 0.0, 1.0}, P, Q);
  CHECK(r.degree() <= 1);
}

TEST_CASE("non-finite coefficients are rejected") {
  CHECK_THROWS_AS(Poly({Complex(NAN, 0.0)}), DomainError);
}
