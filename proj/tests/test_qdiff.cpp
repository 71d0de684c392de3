#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "strebel/errors.hpp"
#include "strebel/qdiff.hpp"

using namespace strebel;

namespace {

const Complex I(0.0, 1.0);
const double kPi = std::numbers::pi;
const Complex kZeroUp(0.5, std::sqrt(3.0) / 2.0);

int order_at(const std::vector<DivisorEntry>& div, const SpherePoint& p, double tol = 1e-8) {
  for (const auto& e : div) {
    if (chordal_distance(e.point, p) < tol) return e.order;
  }
  return 0;
}

int degree_sum(const std::vector<DivisorEntry>& div) {
  int s = 0;
  for (const auto& e : div) s += e.order;
  return s;
}

Complex coeff_at(const QuadDiff& w, Complex z) { return w.coefficient().raw(z); }

// Closed form of the pulled-back family differential.
Complex closed_form_pullback(double a, double b, Complex x) {
  const Complex apb(a, b);
  const Complex u = 2.0 * a * b * I * x - a * apb;
  const Complex v = 2.0 * a * x - apb;
  const double k = 4.0 * a * a * std::pow(a * a + b * b, 2);
  return k / ((u * u - a * a * v * v) * (u * u + b * b * v * v));
}

}  // namespace

TEST_CASE("divisor of q1") {
  const auto div = divisor(make_q1());
  CHECK(div.size() == 5);
  CHECK(order_at(div, 0.0) == -2);
  CHECK(order_at(div, 1.0) == -2);
  CHECK(order_at(div, SpherePoint::infinity()) == -2);
  CHECK(order_at(div, kZeroUp, 1e-12) == 1);
  CHECK(order_at(div, std::conj(kZeroUp), 1e-12) == 1);
  CHECK(degree_sum(div) == -4);
}

TEST_CASE("divisor of the four-pole family and of dz^2") {
  const auto div = divisor(make_four_pole_family(1.0, 1.0));
  CHECK(div.size() == 4);
  for (Complex p : {Complex(1.0), Complex(-1.0), I, -I}) CHECK(order_at(div, p, 1e-12) == -1);
  CHECK(order_at(div, SpherePoint::infinity()) == 0);

  const auto flat = divisor(QuadDiff(RationalFn(Poly{1.0})));
  REQUIRE(flat.size() == 1);
  CHECK(flat[0].point.is_infinity());
  CHECK(flat[0].order == -4);
}

TEST_CASE("q1 pole perimeters") {
  const auto q1 = make_q1();
  for (const SpherePoint p : {SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()}) {
    const auto pd = pole_perimeter(q1, p);
    CHECK(std::abs(pd.c_minus_2 + 1.0 / (kPi * kPi)) < 1e-14);
    CHECK(std::abs(pd.perimeter - 2.0) < 1e-12);
    CHECK(std::abs(pd.sqrt_neg_c.imag()) < 1e-9);
  }
  SUBCASE("numeric limit of (z - p)^2 f, opposite directions averaged") {
    for (double p : {0.0, 1.0}) {
      for (int k = 0; k < 2; ++k) {
        const Complex dz = std::polar(1e-4, 0.3 + k * kPi / 2);
        const Complex lim =
            0.5 * dz * dz * (coeff_at(q1, p + dz) + coeff_at(q1, p - dz));
        CHECK(std::abs(lim + 1.0 / (kPi * kPi)) < 1e-6);
      }
    }
  }
}

TEST_CASE("perimeter of c dz^2 / z^2 with c = -1/(4 pi^2) is one") {
  const QuadDiff w(RationalFn(Poly{-1.0 / (4.0 * kPi * kPi)}, Poly{0.0, 0.0, 1.0}));
  CHECK(std::abs(pole_perimeter(w, 0.0).perimeter - 1.0) < 1e-14);
}

TEST_CASE("pole_perimeter rejects points that are not double poles") {
  const auto q1 = make_q1();
  CHECK_THROWS_AS(pole_perimeter(q1, kZeroUp), DomainError);
  CHECK_THROWS_AS(pole_perimeter(q1, 3.0), DomainError);
  CHECK_THROWS_AS(pole_perimeter(make_four_pole_family(1.0, 1.0), 1.0), DomainError);
}

TEST_CASE("chart at infinity") {
  const auto q1 = make_q1();
  const auto g = chart_at_infinity(q1.coefficient());
  for (Complex w : {Complex(0.1, 0.2), Complex(-0.3, 0.05)}) {
    const Complex expected = q1.coefficient().raw(1.0 / w) / std::pow(w, 4);
    CHECK(std::abs(g.raw(w) - expected) < 1e-12 * std::abs(expected));
  }
}

TEST_CASE("pullback of the family matches the closed form") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, (3.0 + std::sqrt(13.0)) / 2.0}, {0.6, -1.7}}) {
    const auto pulled = mobius_pullback(inverse(build_phi(a, b)), make_four_pole_family(a, b));
    for (int k = 0; k < 20; ++k) {
      const Complex x(u(rng), u(rng));
      const Complex expected = closed_form_pullback(a, b, x);
      CHECK(std::abs(coeff_at(pulled, x) - expected) <= 1e-9 * std::abs(expected));
    }
    const auto div = divisor(pulled);
    CHECK(div.size() == 4);
    const double r = 0.25 * (b / a - a / b);
    for (const SpherePoint p : {SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity(),
                                SpherePoint(Complex(0.5, r))}) {
      CHECK(order_at(div, p) == -1);
    }
  }
}

TEST_CASE("Mobius pullback basics") {
  const auto q1 = make_q1();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);

  SUBCASE("identity") {
    const auto same = mobius_pullback(MobiusMap::identity(), q1);
    for (int k = 0; k < 20; ++k) {
      const Complex z(u(rng), u(rng));
      CHECK(std::abs(coeff_at(same, z) - coeff_at(q1, z)) <= 1e-12 * std::abs(coeff_at(q1, z)));
    }
  }
  SUBCASE("h* q1 = q1") {
    const auto hq = mobius_pullback(build_h(), q1);
    for (int k = 0; k < 20; ++k) {
      const Complex z(u(rng), u(rng));
      CHECK(std::abs(coeff_at(hq, z) - coeff_at(q1, z)) <= 1e-10 * std::abs(coeff_at(q1, z)));
    }
  }
  SUBCASE("divisor moves by the inverse map") {
    const MobiusMap M(Complex(1.0, 0.5), Complex(-0.3, 0.0), Complex(0.2, 1.0), Complex(2.0, -1.0));
    const auto pulled = divisor(mobius_pullback(M, q1));
    const auto base = divisor(q1);
    REQUIRE(pulled.size() == base.size());
    for (const auto& e : base) CHECK(order_at(pulled, inverse(M)(e.point), 1e-7) == e.order);
    CHECK(degree_sum(pulled) == -4);
  }
  SUBCASE("pullback under a composition") {
    const MobiusMap M(Complex(1.0, 0.5), Complex(-0.3, 0.0), Complex(0.2, 1.0), Complex(2.0, -1.0));
    const MobiusMap N(Complex(0.0, 1.0), Complex(1.0, 1.0), Complex(1.0, 0.0), Complex(-0.5, 0.2));
    const auto direct = mobius_pullback(compose(M, N), q1);
    const auto stepwise = mobius_pullback(N, mobius_pullback(M, q1));
    for (int k = 0; k < 20; ++k) {
      const Complex z(u(rng), u(rng));
      const Complex e = coeff_at(stepwise, z);
      CHECK(std::abs(coeff_at(direct, z) - e) <= 1e-9 * std::abs(e));
    }
  }
}

TEST_CASE("rational pullback examples") {
  const RationalFn square(Poly{0.0, 0.0, 1.0});

  SUBCASE("dz^2/z pulls back to 4 dz^2 under z^2") {
    const auto r = rational_pullback(square, QuadDiff(RationalFn(Poly{1.0}, Poly{0.0, 1.0})));
    CHECK(r.coefficient().num().degree() == 0);
    CHECK(r.coefficient().den().degree() == 0);
    CHECK(std::abs(r.coefficient().raw(0.3) - 4.0) < 1e-14);
  }
  SUBCASE("regular nonzero point gets a double zero under z^2") {
    const QuadDiff w(RationalFn(Poly{1.0}, Poly::from_roots(std::vector<Complex>{2.0, 3.0, -4.0, I})));
    const auto div = divisor(rational_pullback(square, w));
    CHECK(order_at(div, 0.0) == 2);
    CHECK(degree_sum(div) == -4);
  }
  SUBCASE("z^4 keeps a double pole and multiplies c_-2 by 16") {
    const Complex c(-0.3, 0.1);
    const QuadDiff w(RationalFn(Poly{c}, Poly{0.0, 0.0, 1.0}));
    const auto r = rational_pullback(RationalFn(Poly{0.0, 0.0, 0.0, 0.0, 1.0}), w);
    const auto div = divisor(r);
    CHECK(order_at(div, 0.0) == -2);
    const auto pd = pole_perimeter(r, 0.0);
    CHECK(std::abs(pd.c_minus_2 - 16.0 * c) < 1e-13);
    CHECK(std::abs(pd.perimeter - 4.0 * pole_perimeter(w, 0.0).perimeter) < 1e-12);
  }
  SUBCASE("constant map is rejected") {
    CHECK_THROWS_AS(rational_pullback(RationalFn(Poly{2.0}), make_q1()), DomainError);
  }
}

TEST_CASE("pullback order law on random maps") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> deg(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    int dp = deg(rng), dq = deg(rng);
    if (std::max(dp, dq) == 0) dp = 1;
    std::vector<Complex> pc(dp + 1), qc(dq + 1);
    for (auto& c : pc) c = Complex(g(rng), g(rng));
    for (auto& c : qc) c = Complex(g(rng), g(rng));
    const RationalFn psi{Poly(pc), Poly(qc)};
    std::vector<Complex> poles;
    for (int k = 0; k < 4; ++k) poles.push_back(Complex(g(rng), g(rng)));
    const QuadDiff w(RationalFn(Poly{1.0}, Poly::from_roots(poles)));

    // Independent expectation: preimages of the poles have order e - 2,
    // ramification points over regular values have order 2e - 2.
    std::vector<DivisorEntry> expected;
    const Poly& P = psi.num();
    const Poly& Q = psi.den();
    auto add = [&](SpherePoint p, int ord) {
      if (ord == 0) return;
      for (auto& e : expected) {
        if (chordal_distance(e.point, p) < 1e-7) {
          e.order += ord;
          return;
        }
      }
      expected.push_back({p, ord});
    };
    for (const auto& a : poles) {
      const Poly fibre = P - Q * a;
      if (fibre.degree() >= 1) {
        for (const auto& r : roots(fibre)) add(r.z, r.multiplicity - 2);
      }
    }
    // leading terms cancel when deg P = deg Q; drop the rounding residue
    const Poly W = (P.derivative() * Q - P * Q.derivative())
                       .trimmed_against(P.derivative().abs() * Q.abs() + P.abs() * Q.derivative().abs(), 1e3);
    if (W.degree() >= 1) {
      for (const auto& r : roots(W)) {
        if (std::abs(Q(r.z)) > 1e-9) add(r.z, 2 * r.multiplicity);
      }
    }
    if (Q.degree() >= 1) {
      for (const auto& r : roots(Q)) add(r.z, 2 * r.multiplicity - 2);
    }
    const int e_inf = std::abs(psi.num().degree() - psi.den().degree());
    if (e_inf > 0) {
      add(SpherePoint::infinity(), 2 * e_inf - 2);
    } else {
      // psi(infinity) finite: local degree from the drop in deg(P - c Q)
      const Complex c = psi.num().leading() / psi.den().leading();
      const Poly diff = (P - Q * c).trimmed_against(P.abs() + Q.abs() * std::abs(c), 1e3);
      const int e = Q.degree() - diff.degree();
      bool over_pole = false;
      for (const auto& a : poles) over_pole = over_pole || std::abs(a - c) < 1e-12;
      add(SpherePoint::infinity(), over_pole ? e - 2 : 2 * e - 2);
    }

    const auto got = divisor(rational_pullback(psi, w));
    CHECK(degree_sum(got) == -4);
    int nonzero_expected = 0;
    for (const auto& e : expected) {
      if (e.order == 0) continue;
      ++nonzero_expected;
      CHECK(order_at(got, e.point, 1e-6) == e.order);
    }
    CHECK(static_cast<int>(got.size()) == nonzero_expected);
  }
}
