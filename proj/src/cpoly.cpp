#include "strebel/cpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>

#include "strebel/errors.hpp"

namespace strebel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Two roots closer than this (relative to max(1,|z|)) are always merged.
constexpr double kClusterRho = 1e-8;
// Tolerance for cancelling a numerator root against a denominator root.
constexpr double kCancelTol = 1e-7;
// Relative size below which num/den values count as vanishing in rat_eval.
constexpr double kEvalTol = 1e-10;

int trailing_zeros(const std::vector<Complex>& c) {
  int k = 0;
  while (k < static_cast<int>(c.size()) && c[k] == Complex(0.0)) ++k;
  return k;
}

struct Eval {
  Complex p;
  Complex dp;
};

Eval horner_with_derivative(const std::vector<Complex>& a, Complex z) {
  Complex p = a.back();
  Complex dp = 0.0;
  for (int k = static_cast<int>(a.size()) - 2; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + a[k];
  }
  return {p, dp};
}

// Ehrlich-Aberth simultaneous iteration for a polynomial with nonzero
// constant and leading coefficient.
std::vector<Complex> aberth(const Poly& p) {
  const auto& a = p.coeffs();
  const int n = p.degree();
  if (n == 1) return {-a[0] / a[1]};

  const Complex center = -a[n - 1] / (static_cast<double>(n) * a[n]);
  double radius = std::pow(std::abs(p(center) / a[n]), 1.0 / n);
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;

  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n + 0.4;
    z[k] = center + radius * std::polar(1.0, angle);
  }

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < 2000; ++iter) {
    bool all_done = true;
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      const auto [pz, dpz] = horner_with_derivative(a, z[k]);
      const double noise = 4.0 * n * kEps * p.magnitude_bound(z[k]);
      if (std::abs(pz) <= noise) {
        done[k] = true;
        continue;
      }
      all_done = false;
      Complex repulsion = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex ratio = pz / dpz;
      Complex w = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        w = ratio;
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = radius * 1e-3;
      }
      z[k] -= w;
      if (std::abs(w) <= kEps * std::abs(z[k])) done[k] = true;
    }
    if (all_done) return z;
  }
  return z;
}

// Newton on q from z0; keeps the best iterate by |q|.
Complex polish(const Poly& q, Complex z0, double max_move) {
  Complex best = z0;
  double best_val = std::abs(q(z0));
  Complex z = z0;
  for (int it = 0; it < 6; ++it) {
    const auto [v, dv] = horner_with_derivative(q.coeffs(), z);
    if (dv == Complex(0.0)) break;
    z -= v / dv;
    if (std::abs(z - z0) > max_move) break;
    const double val = std::abs(q(z));
    if (val < best_val) {
      best_val = val;
      best = z;
    } else {
      break;
    }
  }
  return best;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

// ---------------------------------------------------------------- Poly

Poly::Poly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw DomainError("polynomial coefficient is not finite");
    }
  }
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
}

Poly Poly::constant(Complex c) { return Poly(std::vector<Complex>{c}); }

Poly Poly::monomial(int degree, Complex c) {
  std::vector<Complex> v(degree + 1, 0.0);
  v[degree] = c;
  return Poly(std::move(v));
}

Poly Poly::from_roots(std::span<const Complex> rs, Complex lead) {
  std::vector<Complex> c{lead};
  for (const auto& r : rs) {
    c.push_back(0.0);
    for (size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Poly(std::move(c));
}

Complex Poly::coeff(int k) const {
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Complex(0.0);
}

Complex Poly::leading() const { return coeffs_.empty() ? Complex(0.0) : coeffs_.back(); }

Complex Poly::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Poly::magnitude_bound(Complex z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Poly(std::move(d));
}

Poly Poly::deflate(Complex r) const {
  if (coeffs_.size() <= 1) return {};
  const int n = degree();
  std::vector<Complex> q(n);
  Complex carry = coeffs_[n];
  for (int k = n - 1; k >= 0; --k) {
    q[k] = carry;
    carry = coeffs_[k] + carry * r;
  }
  return Poly(std::move(q));
}

Poly Poly::abs() const {
  std::vector<Complex> a(coeffs_.size());
  for (size_t k = 0; k < coeffs_.size(); ++k) a[k] = std::abs(coeffs_[k]);
  return Poly(std::move(a));
}

double Poly::norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

Poly Poly::trimmed_against(const Poly& bound, double factor) const {
  std::vector<Complex> c = coeffs_;
  while (!c.empty()) {
    const int k = static_cast<int>(c.size()) - 1;
    if (std::abs(c[k]) > factor * kEps * std::abs(bound.coeff(k))) break;
    c.pop_back();
  }
  return Poly(std::move(c));
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
  return *this;
}

Poly& Poly::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(c));
}

Poly Poly::pow(int n) const {
  Poly result = Poly::constant(1.0);
  Poly base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------- roots

std::vector<Root> roots(const Poly& p) {
  if (p.is_zero() || p.degree() < 1) throw DomainError("constant polynomial");

  const int zeros = trailing_zeros(p.coeffs());
  Poly reduced(std::vector<Complex>(p.coeffs().begin() + zeros, p.coeffs().end()));

  std::vector<Complex> z;
  std::vector<double> radius;
  if (reduced.degree() >= 1) {
    z = aberth(reduced);
    const int n = reduced.degree();
    const double lead = std::abs(reduced.leading());
    radius.resize(n);
    for (int k = 0; k < n; ++k) {
      double prod = lead;
      for (int j = 0; j < n; ++j) {
        if (j != k) prod *= std::abs(z[k] - z[j]);
      }
      const double residual = std::abs(reduced(z[k])) + 2.0 * n * kEps * reduced.magnitude_bound(z[k]);
      radius[k] = prod > 0.0 ? n * residual / prod : std::numeric_limits<double>::infinity();
    }
  }
  for (int k = 0; k < zeros; ++k) {
    z.push_back(0.0);
    radius.push_back(0.0);
  }

  const int m = static_cast<int>(z.size());
  UnionFind uf(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = std::abs(z[i] - z[j]);
      const double scale = std::max({1.0, std::abs(z[i]), std::abs(z[j])});
      if (d <= radius[i] + radius[j] || d <= kClusterRho * scale) uf.unite(i, j);
    }
  }

  std::vector<std::vector<int>> groups(m);
  for (int i = 0; i < m; ++i) groups[uf.find(i)].push_back(i);

  std::vector<Root> out;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    const int mult = static_cast<int>(g.size());
    bool has_exact_zero = false;
    Complex centroid = 0.0;
    for (int i : g) {
      centroid += z[i];
      if (i >= m - zeros) has_exact_zero = true;
    }
    centroid /= static_cast<double>(mult);
    double spread = 0.0;
    for (int i : g) spread = std::max(spread, std::abs(z[i] - centroid));

    Complex root = centroid;
    if (has_exact_zero) {
      root = 0.0;
    } else {
      // A root of multiplicity m is a simple root of the (m-1)th derivative.
      Poly q = p;
      for (int d = 1; d < mult; ++d) q = q.derivative();
      const double max_move = std::max(10.0 * spread, 1e-6 * std::max(1.0, std::abs(centroid)));
      root = polish(q, centroid, max_move);
    }
    out.push_back({root, mult});
  }
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
    return canonical_less(a.z, b.z);
  });
  return out;
}

// ---------------------------------------------------------------- RationalFn

namespace {

struct Reduced {
  Poly num;
  Poly den;
};

Reduced cancel_common_roots(Poly num, Poly den) {
  const int common_zeros = std::min(trailing_zeros(num.coeffs()), trailing_zeros(den.coeffs()));
  if (common_zeros > 0) {
    num = Poly(std::vector<Complex>(num.coeffs().begin() + common_zeros, num.coeffs().end()));
    den = Poly(std::vector<Complex>(den.coeffs().begin() + common_zeros, den.coeffs().end()));
  }
  if (num.degree() < 1 || den.degree() < 1) return {std::move(num), std::move(den)};

  const auto rn = roots(num);
  const auto rd = roots(den);
  std::vector<int> used(rn.size(), 0);
  for (const auto& d : rd) {
    for (size_t i = 0; i < rn.size(); ++i) {
      const double scale = std::max(1.0, std::abs(d.z));
      if (used[i] < rn[i].multiplicity && std::abs(rn[i].z - d.z) <= kCancelTol * scale) {
        const int k = std::min(rn[i].multiplicity - used[i], d.multiplicity);
        const Complex at = 0.5 * (rn[i].z + d.z);
        for (int t = 0; t < k; ++t) {
          num = num.deflate(at);
          den = den.deflate(at);
        }
        used[i] += k;
        break;
      }
    }
  }
  return {std::move(num), std::move(den)};
}

}  // namespace

RationalFn::RationalFn(Poly num, Poly den) {
  if (den.is_zero()) throw DomainError("zero denominator");
  if (num.is_zero()) {
    den_ = Poly::constant(1.0);
    return;
  }
  auto r = cancel_common_roots(std::move(num), std::move(den));
  const Complex lead = r.den.leading();
  num_ = r.num * (1.0 / lead);
  den_ = r.den * (1.0 / lead);
}

RationalFn::RationalFn(Poly p) : num_(std::move(p)), den_(Poly::constant(1.0)) {}

RationalFn RationalFn::coprime(Poly num, Poly den) {
  if (den.is_zero()) throw DomainError("zero denominator");
  RationalFn f;
  const Complex lead = den.leading();
  f.num_ = num * (1.0 / lead);
  f.den_ = den * (1.0 / lead);
  if (f.num_.is_zero()) f.den_ = Poly::constant(1.0);
  return f;
}

int RationalFn::map_degree() const { return std::max(num_.degree(), den_.degree()); }

RationalFn operator*(const RationalFn& a, const RationalFn& b) {
  return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFn operator+(const RationalFn& a, const RationalFn& b) {
  return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

SpherePoint rat_eval(const RationalFn& f, const SpherePoint& z) {
  const Poly& n = f.num();
  const Poly& d = f.den();
  if (z.is_infinity()) {
    if (n.degree() > d.degree()) return SpherePoint::infinity();
    if (n.degree() < d.degree()) return Complex(0.0);
    return n.leading() / d.leading();
  }
  const Complex x = z.value();
  const Complex nv = n(x);
  const Complex dv = d(x);
  const bool num_vanishes = std::abs(nv) <= kEvalTol * n.magnitude_bound(x);
  const bool den_vanishes = std::abs(dv) <= kEvalTol * d.magnitude_bound(x);
  if (den_vanishes && num_vanishes && !n.is_zero()) {
    throw IndeterminateError("0/0 while evaluating rational function");
  }
  if (den_vanishes) return SpherePoint::infinity();
  return nv / dv;
}

RationalFn rat_derivative(const RationalFn& f) {
  const Poly& n = f.num();
  const Poly& d = f.den();
  if (d.degree() == 0) return RationalFn(n.derivative() * (1.0 / d.leading()));
  const Poly nd = n.derivative();
  const Poly dd = d.derivative();
  const Poly top = (nd * d - n * dd).trimmed_against(nd.abs() * d.abs() + n.abs() * dd.abs());
  return RationalFn(top, d * d);
}

Poly compose_homogeneous(const Poly& p, const Poly& P, const Poly& Q) {
  if (p.is_zero()) return {};
  const int n = p.degree();
  std::vector<Poly> Ppow{Poly::constant(1.0)};
  std::vector<Poly> Qpow{Poly::constant(1.0)};
  std::vector<Poly> Pabs{Poly::constant(1.0)};
  std::vector<Poly> Qabs{Poly::constant(1.0)};
  for (int k = 1; k <= n; ++k) {
    Ppow.push_back(Ppow.back() * P);
    Qpow.push_back(Qpow.back() * Q);
    Pabs.push_back(Pabs.back() * P.abs());
    Qabs.push_back(Qabs.back() * Q.abs());
  }
  Poly value;
  Poly bound;
  for (int k = 0; k <= n; ++k) {
    const Complex c = p.coeff(k);
    if (c == Complex(0.0)) continue;
    value += (Ppow[k] * Qpow[n - k]) * c;
    bound += (Pabs[k] * Qabs[n - k]) * std::abs(c);
  }
  return value.trimmed_against(bound, 64.0 * (n + 1));
}

Poly compose(const Poly& p, const Poly& q) {
  return compose_homogeneous(p, q, Poly::constant(1.0));
}

}  // namespace strebel
