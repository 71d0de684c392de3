#include <cmath>
#include <random>

#include "doctest.h"
#include "strebel/errors.hpp"
#include "strebel/mobius.hpp"

using namespace strebel;

namespace {

const Complex I(0.0, 1.0);

Complex fin(const SpherePoint& p) {
  REQUIRE(p.is_finite());
  return p.value();
}

MobiusMap random_map(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    try {
      return MobiusMap({g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)}, {g(rng), g(rng)});
    } catch (const DomainError&) {
    }
  }
}

// Circle (or line) through three points; returns distance of z from it.
double off_circle(Complex a, Complex b, Complex c, Complex z) {
  const Complex ab = b - a, ac = c - a;
  const double cross = ab.real() * ac.imag() - ab.imag() * ac.real();
  if (std::abs(cross) < 1e-12 * std::abs(ab) * std::abs(ac)) {
    const Complex u = ab / std::abs(ab);
    return std::abs(((z - a) / u).imag());
  }
  const double d = 2.0 * cross;
  const double b2 = std::norm(ab), c2 = std::norm(ac);
  const Complex center = a + Complex((ac.imag() * b2 - ab.imag() * c2) / d,
                                     (ab.real() * c2 - ac.real() * b2) / d);
  return std::abs(std::abs(z - center) - std::abs(a - center)) / std::abs(a - center);
}

}  // namespace

TEST_CASE("phi sends a, -a, bi, -bi to 0, 1, infinity, 1/2 + ri") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {-1.5, 3.0}, {0.7, -2.2}}) {
    const auto phi = build_phi(a, b);
    CHECK(std::abs(fin(phi(a))) < 1e-14);
    CHECK(std::abs(fin(phi(-a)) - 1.0) < 1e-14);
    CHECK(phi(b * I).is_infinity());
    const Complex expected = 0.5 + 0.25 * (b / a - a / b) * I;
    CHECK(std::abs(fin(phi(-b * I)) - expected) < 1e-14);
    CHECK(std::abs(phi.det()) > 0.0);
  }
}

TEST_CASE("build_phi special values") {
  CHECK(std::abs(fin(build_phi(1.0, 1.0)(-I)) - 0.5) < 1e-15);
  const double b = (3.0 + std::sqrt(13.0)) / 2.0;
  CHECK(std::abs(fin(build_phi(1.0, b)(-b * I)) - Complex(0.5, 0.75)) < 1e-14);
  CHECK_THROWS_AS(build_phi(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_phi(1.0, 0.0), DomainError);
}

TEST_CASE("inverse of phi matches the closed-form matrix up to scale") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {1.0, 3.3}, {-0.4, 2.0}}) {
    const Complex apb(a, b);
    const MobiusMap expected(2.0 * a * b * I, -a * apb, 2.0 * a, -apb);
    CHECK(inverse(build_phi(a, b)).projectively_equal(expected));
  }
  CHECK(inverse(MobiusMap::identity()).projectively_equal(MobiusMap::identity()));
}

TEST_CASE("h values and order three") {
  const auto h = build_h();
  CHECK(std::abs(fin(h(0.5)) + 1.0) < 1e-15);
  CHECK(std::abs(fin(h(2.0)) - 0.5) < 1e-15);
  const Complex zp(0.5, std::sqrt(3.0) / 2.0);
  CHECK(std::abs(fin(h(zp)) - zp) < 1e-15);
  CHECK(std::abs(fin(h(std::conj(zp))) - std::conj(zp)) < 1e-15);
  CHECK(compose(h, compose(h, h)).projectively_equal(MobiusMap::identity(), 1e-12));
  CHECK_FALSE(compose(h, h).projectively_equal(MobiusMap::identity(), 1e-6));
}

TEST_CASE("h twice carries the vertical arc onto the circle about 1") {
  const auto hh = compose(build_h(), build_h());
  const Complex z = fin(hh(Complex(0.5, 0.3)));
  CHECK(std::abs(std::abs(z - 1.0) - 1.0) < 1e-10);
  CHECK(z.real() >= 0.5);
}

TEST_CASE("identity, infinity conventions") {
  const auto id = MobiusMap::identity();
  CHECK(fin(id(Complex(0.3, -2.0))) == Complex(0.3, -2.0));
  CHECK(id(SpherePoint::infinity()).is_infinity());
  const auto h = build_h();
  CHECK(std::abs(fin(h(SpherePoint::infinity())) - 1.0) < 1e-15);
  CHECK(h(0.0).is_infinity());
}

TEST_CASE("composition and inversion are consistent pointwise") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const auto M = random_map(rng);
    const auto N = random_map(rng);
    CHECK(compose(M, inverse(M)).projectively_equal(MobiusMap::identity(), 1e-10));
    CHECK(compose(MobiusMap::identity(), N).projectively_equal(N));
    const auto MN = compose(M, N);
    for (int k = 0; k < 20; ++k) {
      const Complex z(g(rng), g(rng));
      const Complex back = fin(inverse(M)(fin(M(z))));
      CHECK(std::abs(back - z) < 1e-10 * std::max(1.0, std::abs(z)));
      const Complex lhs = fin(MN(z));
      const Complex rhs = fin(M(fin(N(z))));
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("Mobius maps send circles to circles") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const auto M = random_map(rng);
    const Complex center(g(rng), g(rng));
    const double radius = 0.2 + std::abs(g(rng));
    std::vector<Complex> img;
    for (int k = 0; k < 50; ++k) {
      const auto w = M(center + std::polar(radius, 2.0 * M_PI * k / 50.0));
      if (w.is_finite() && std::abs(w.value()) < 1e6) img.push_back(w.value());
    }
    REQUIRE(img.size() >= 45);
    const size_t n = img.size();
    for (const auto& z : img) CHECK(off_circle(img[0], img[n / 3], img[2 * n / 3], z) < 1e-8);
  }
}

TEST_CASE("derivative matches a finite difference") {
  const auto phi = build_phi(1.0, 2.0);
  const Complex z(0.3, 0.4), h(1e-6, 0.0);
  const Complex fd = (fin(phi(z + h)) - fin(phi(z - h))) / (2.0 * h);
  CHECK(std::abs(fd - phi.derivative(z)) < 1e-7);
}

TEST_CASE("singular matrix is rejected") {
  CHECK_THROWS_AS(MobiusMap(1.0, 2.0, 2.0, 4.0), DomainError);
}
