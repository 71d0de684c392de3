#include "strebel/constructions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "strebel/errors.hpp"

namespace strebel {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_distinct(const std::vector<SpherePoint>& pts, const char* what) {
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      if (chordal_distance(pts[i], pts[j]) < 1e-9) throw DomainError(what);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- hyperelliptic

std::pair<double, double> solve_ab(double r) {
  const double s = std::sqrt(4.0 * r * r + 1.0);
  // avoid cancellation for negative r
  const double b = r >= 0.0 ? 2.0 * r + s : 1.0 / (s - 2.0 * r);
  return {1.0, b};
}

HyperellipticSpec build_hyperelliptic(double r, const std::vector<SpherePoint>& extra) {
  if (!std::isfinite(r)) throw DomainError("r must be finite");
  const auto [a, b] = solve_ab(r);
  const SpherePoint beta1 = Complex(0.5, r);
  std::vector<SpherePoint> all{SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity(), beta1};
  all.insert(all.end(), extra.begin(), extra.end());
  require_distinct(all, "branch points collide");

  QuadDiff base = mobius_pullback(inverse(build_phi(a, b)), make_four_pole_family(a, b));
  std::vector<OrderCertificate> cert;
  int total = 0;
  const auto div = divisor(base);
  auto base_order = [&](const SpherePoint& p) {
    for (const auto& e : div) {
      if (chordal_distance(e.point, p) < 1e-7) return e.order;
    }
    return 0;
  };
  for (size_t i = 0; i < all.size(); ++i) {
    const int ord = base_order(all[i]);
    const int pulled = pulled_back_order(2, ord);
    cert.push_back({all[i], 2, ord, pulled});
    total += pulled;
  }
  return {r, extra, a, b, std::move(base), std::move(cert), total};
}

// ---------------------------------------------------------------- elliptic

namespace {

using boost::math::quadrature::gauss_kronrod;

// 2 * integral of dz / sqrt(P) from p to q along the straight segment, P the
// product of (z - a) over the finite branch points. Each factor's square
// root is continued along the segment from the midpoint.
Complex half_period(const std::vector<Complex>& roots, size_t ip, size_t iq) {
  const Complex p = roots[ip], q = roots[iq];
  const Complex m = 0.5 * (p + q);
  Complex K = 1.0;
  for (const auto& a : roots) K *= std::sqrt(m - a);
  auto S_without = [&](Complex z, size_t skip) {
    Complex s = 1.0;
    for (size_t i = 0; i < roots.size(); ++i) {
      if (i != skip) s *= std::sqrt((z - roots[i]) / (m - roots[i]));
    }
    return s;
  };
  auto from = [&](size_t idx, Complex e) {
    auto g = [&](double u) { return 1.0 / S_without(e + (m - e) * u * u, idx); };
    double err = 0.0;
    const Complex v = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, 1e-14, &err);
    if (!finite(v)) throw NumericalError("period quadrature did not converge");
    return 2.0 * (m - e) / K * v;
  };
  const Complex pm = from(ip, p);
  const Complex qm = from(iq, q);
  return 2.0 * (pm - qm);
}

}  // namespace

Complex reduce_modular(Complex tau) {
  if (!(tau.imag() > 0.0)) throw DomainError("tau must lie in the upper half-plane");
  for (int it = 0; it < 1000; ++it) {
    tau -= std::round(tau.real());
    if (std::norm(tau) < 1.0 - 1e-15) {
      tau = -1.0 / tau;
    } else {
      break;
    }
  }
  if (tau.real() >= 0.5) tau -= 1.0;
  return tau;
}

EllipticSlopeReport elliptic_strebel_test(const std::array<SpherePoint, 4>& pts, Complex c_prime, int Q) {
  if (Q < 1) throw DomainError("Q must be at least 1");
  if (c_prime == Complex(0.0) || !finite(c_prime)) throw DomainError("c' must be nonzero");
  std::vector<SpherePoint> sorted(pts.begin(), pts.end());
  require_distinct(sorted, "branch points must be distinct");
  std::sort(sorted.begin(), sorted.end(), canonical_less);
  std::vector<Complex> finite_pts;
  for (const auto& p : sorted) {
    if (p.is_finite()) finite_pts.push_back(p.value());
  }

  EllipticSlopeReport rep;
  rep.branch_points = sorted;
  rep.omega1 = half_period(finite_pts, 0, 1);
  rep.omega2 = half_period(finite_pts, 1, 2);
  Complex tau = rep.omega2 / rep.omega1;
  if (std::abs(tau.imag()) < 1e-12 * std::abs(tau)) throw NumericalError("degenerate period lattice");
  if (tau.imag() < 0.0) {
    rep.omega2 = -rep.omega2;
    tau = -tau;
  }
  rep.tau = tau;
  rep.c_prime = c_prime;
  rep.Q = Q;
  double theta = std::fmod(-0.5 * std::arg(c_prime) - std::arg(rep.omega1), kPi);
  if (theta < 0.0) theta += kPi;
  rep.direction = theta;

  // smallest height first, then smallest defect
  double best = 1e-9;
  int best_h = Q + 1;
  for (int n = 0; n <= Q; ++n) {
    for (int m = -Q; m <= Q; ++m) {
      if ((m == 0 && n == 0) || std::gcd(m, n) != 1) continue;
      if (n == 0 && m != 1) continue;
      const double defect = std::abs(std::sin(std::arg(Complex(m) + double(n) * tau) - theta));
      const int h = std::max(std::abs(m), n);
      if (defect < 1e-9 && (h < best_h || (h == best_h && defect < best))) {
        best_h = h;
        best = defect;
        rep.rational_witness = std::pair{m, n};
      }
    }
  }
  rep.strebel = rep.rational_witness.has_value();
  return rep;
}

// ---------------------------------------------------------------- cover

Poly CoverSolution::p() const { return Poly{c0, c1, c2, c3, 1.0}; }

std::array<Complex, 3> cover_targets(double r) {
  const Complex c(0.5, r * kSqrt3);
  const MobiusMap h = build_h();
  return {h(c).value(), c, inverse(h)(c).value()};
}

namespace {

struct Sym {
  Complex s1, s2, s3;
  explicit Sym(const std::array<Complex, 3>& b)
      : s1(b[0] + b[1] + b[2]), s2(b[0] * b[1] + b[1] * b[2] + b[2] * b[0]), s3(b[0] * b[1] * b[2]) {}
};

Complex quartic_at(const Sym& s, Complex z) {
  return (((z - 4.0 / 3.0 * s.s1) * z + 2.0 * s.s2) * z - 4.0 * s.s3) * z + s.s3;
}

double max_abs(const std::array<Complex, 3>& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

bool acceptable(const std::array<Complex, 3>& b) {
  for (int i = 0; i < 3; ++i) {
    if (!finite(b[i]) || std::abs(b[i]) > 1e6) return false;
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(b[i] - b[j]) < 1e-6) return false;
    }
  }
  return true;
}

struct NewtonResult {
  std::array<Complex, 3> b;
  double residual = std::numeric_limits<double>::infinity();
  bool ok = false;
};

NewtonResult damped_newton(std::array<Complex, 3> b, const std::array<Complex, 3>& a) {
  auto F = cover_system(b, a);
  double res = max_abs(F);
  for (int it = 0; it < 200 && std::isfinite(res); ++it) {
    const Sym s(b);
    Eigen::Matrix3cd J;
    for (int i = 0; i < 3; ++i) {
      const Complex z = b[i];
      for (int j = 0; j < 3; ++j) {
        const Complex ej = b[(j + 1) % 3] * b[(j + 2) % 3];
        J(i, j) = -4.0 / 3.0 * z * z * z + 2.0 * (s.s1 - b[j]) * z * z - 4.0 * ej * z + ej;
      }
    }
    Eigen::Vector3cd rhs(-F[0], -F[1], -F[2]);
    const Eigen::Vector3cd delta = J.fullPivLu().solve(rhs);
    if (!delta.allFinite()) break;
    double lambda = 1.0;
    bool accepted = false;
    while (lambda > 1e-10) {
      std::array<Complex, 3> bn{b[0] + lambda * delta(0), b[1] + lambda * delta(1), b[2] + lambda * delta(2)};
      const auto Fn = cover_system(bn, a);
      const double rn = max_abs(Fn);
      if (rn < res) {
        b = bn;
        F = Fn;
        res = rn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
  }
  return {b, res, res < 1e-10 && acceptable(b)};
}

std::vector<std::array<Complex, 3>> start_triples(const std::array<Complex, 3>& a, unsigned long long seed) {
  const Complex centre = (a[0] + a[1] + a[2]) / 3.0;
  std::vector<Complex> grid;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      const Complex z(i, j);
      if (std::abs(z) <= 3.0) grid.push_back(centre + z);
    }
  }
  std::vector<std::array<int, 3>> idx;
  const int n = static_cast<int>(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (i != j && j != k && i != k) idx.push_back({i, j, k});
      }
    }
  }
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::array<Complex, 3>> out;
  for (int s = 0; s < 64; ++s) out.push_back({grid[idx[s][0]], grid[idx[s][1]], grid[idx[s][2]]});
  return out;
}

unsigned long long env_seed() {
  const char* s = std::getenv("STREBEL_SEED");
  if (s == nullptr || *s == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw DomainError("STREBEL_SEED must be a non-negative integer");
  return v;
}

}  // namespace

std::array<Complex, 3> cover_system(const std::array<Complex, 3>& b, const std::array<Complex, 3>& a) {
  const Sym s(b);
  return {quartic_at(s, b[0]) - a[0], quartic_at(s, b[1]) - a[1], quartic_at(s, b[2]) - a[2]};
}

CoverSolution cover_solver(double r, Exec exec) { return cover_solver(r, env_seed(), exec); }

CoverSolution cover_solver(double r, unsigned long long seed, Exec exec) {
  if (!(r > 0.0 && r < 0.5)) throw DomainError("r must lie strictly between 0 and 1/2");
  const auto a = cover_targets(r);
  const auto starts = start_triples(a, seed);
  std::vector<NewtonResult> results(starts.size());
  const long n = static_cast<long>(starts.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) results[i] = damped_newton(starts[i], a);
  } else {
    for (long i = 0; i < n; ++i) results[i] = damped_newton(starts[i], a);
  }

  const NewtonResult* best = nullptr;
  int converged = 0;
  double best_any = std::numeric_limits<double>::infinity();
  for (const auto& res : results) {
    if (std::isfinite(res.residual)) best_any = std::min(best_any, res.residual);
    if (!res.ok) continue;
    ++converged;
    if (best == nullptr || res.residual < best->residual ||
        (res.residual == best->residual &&
         std::pair(res.b[0].real(), res.b[0].imag()) < std::pair(best->b[0].real(), best->b[0].imag()))) {
      best = &res;
    }
  }
  if (best == nullptr) throw SolverFailure("no Newton start converged", best_any);

  CoverSolution sol;
  sol.r = r;
  sol.b1 = best->b[0];
  sol.b2 = best->b[1];
  sol.b3 = best->b[2];
  const Sym s(best->b);
  sol.c3 = -4.0 / 3.0 * s.s1;
  sol.c2 = 2.0 * s.s2;
  sol.c1 = -4.0 * s.s3;
  sol.c0 = s.s3;
  sol.c = a[1];
  sol.a = a;
  const Poly p = sol.p();
  sol.residual = std::max({std::abs(p(sol.b1) - a[0]), std::abs(p(sol.b2) - a[1]), std::abs(p(sol.b3) - a[2])});
  sol.converged_starts = converged;
  return sol;
}

std::array<double, 3> reduced_system_at(const std::array<double, 3>& b) {
  const double s1 = b[0] + b[1] + b[2];
  const double s2 = b[0] * b[1] + b[1] * b[2] + b[2] * b[0];
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = b[i] * b[i] - 4.0 / 3.0 * s1 * b[i] + 2.0 * s2 - 4.0 * b[(i + 1) % 3] * b[(i + 2) % 3];
  }
  return out;
}

namespace {

using Q = boost::rational<long long>;
using Mono = std::array<int, 4>;  // exponents of b1, b2, b3, b4

struct MPoly {
  std::map<Mono, Q> terms;

  static MPoly var(int k) {
    Mono m{};
    m[k] = 1;
    return {{{m, Q(1)}}};
  }
  static MPoly constant(Q c) { return {{{Mono{}, c}}}; }

  MPoly operator+(const MPoly& o) const {
    MPoly r = *this;
    for (const auto& [m, c] : o.terms) r.terms[m] += c;
    return r;
  }
  MPoly operator*(const MPoly& o) const {
    MPoly r;
    for (const auto& [m1, c1] : terms) {
      for (const auto& [m2, c2] : o.terms) {
        Mono m;
        for (int k = 0; k < 4; ++k) m[k] = m1[k] + m2[k];
        r.terms[m] += c1 * c2;
      }
    }
    return r;
  }
  MPoly operator*(Q c) const { return *this * constant(c); }

  MPoly diff(int k) const {
    MPoly r;
    for (const auto& [m, c] : terms) {
      if (m[k] == 0) continue;
      Mono d = m;
      d[k] -= 1;
      r.terms[d] += c * Q(m[k]);
    }
    return r;
  }
  Q at(const std::array<Q, 4>& x) const {
    Q sum(0);
    for (const auto& [m, c] : terms) {
      Q t = c;
      for (int k = 0; k < 4; ++k) {
        for (int e = 0; e < m[k]; ++e) t *= x[k];
      }
      sum += t;
    }
    return sum;
  }
};

}  // namespace

std::array<std::array<std::pair<long long, long long>, 3>, 3> homogenized_jacobian_at_fixture() {
  const MPoly b[4] = {MPoly::var(0), MPoly::var(1), MPoly::var(2), MPoly::var(3)};
  const MPoly s1 = b[0] + b[1] + b[2];
  const MPoly s2 = b[0] * b[1] + b[1] * b[2] + b[2] * b[0];
  const MPoly s3 = b[0] * b[1] * b[2];
  const std::array<Q, 4> point{Q(1), Q(1), Q(1), Q(0)};
  const int vars[3] = {0, 1, 3};  // chart b3 = 1
  std::array<std::array<std::pair<long long, long long>, 3>, 3> rows{};
  for (int i = 0; i < 3; ++i) {
    const MPoly& z = b[i];
    // the a_i b4^4 term has zero gradient at b4 = 0 and is left out
    const MPoly e = z * z * z * z + s1 * z * z * z * Q(-4, 3) + s2 * z * z * Q(2) + s3 * z * Q(-4) + s3 * b[3];
    for (int j = 0; j < 3; ++j) {
      const Q v = e.diff(vars[j]).at(point);
      rows[i][j] = {v.numerator(), v.denominator()};
    }
  }
  return rows;
}

QuadDiff cover_differential(const CoverSolution& sol) {
  return rational_pullback(RationalFn(sol.p()), make_q1());
}

CoverPeriodReport verify_cover_periods(const CoverSolution& sol, const TraceConfig& cfg) {
  if (!(sol.residual < 1e-10)) throw DomainError("cover solution residual too large");
  const QuadDiff w = cover_differential(sol);
  CoverPeriodReport rep;
  rep.graph = critical_graph(w, cfg);
  if (rep.graph.verdict.kind != VerdictKind::Strebel) {
    throw NumericalError("pulled-back differential not Strebel: " + rep.graph.verdict.diagnostic);
  }
  const QuadDiff q1 = make_q1();
  rep.L = ell(q1, sol.c);
  rep.all_in_L_classes = true;
  for (const auto& e : periods(rep.graph, w).entries) {
    PeriodClass pc{e.length, "other", e.from, e.to};
    if (std::abs(e.length - rep.L) < 1e-6) {
      pc.label = "L";
    } else if (std::abs(e.length - (1.0 - rep.L)) < 1e-6) {
      pc.label = "1-L";
    } else if (std::abs(e.length - 1.0) < 1e-6) {
      pc.label = "L+(1-L)";
    }
    if (pc.label != "L" && pc.label != "1-L") rep.all_in_L_classes = false;
    rep.periods.push_back(pc);
  }
  for (const auto& e : divisor(w)) {
    if (e.order != -2) continue;
    const double per = pole_perimeter(w, e.point).perimeter;
    rep.perimeters.push_back({e.point, per, per / pole_perimeter(q1, 0.0).perimeter});
  }
  rep.boundaries = pole_boundaries(rep.graph, w);
  return rep;
}

// ---------------------------------------------------------------- preimages

PreimageGraph build_preimage_graph(int n, bool on_critical) {
  if (n < 1) throw DomainError("n must be at least 1");
  PreimageGraph g;
  g.on_critical = on_critical;
  if (on_critical) {
    g.loops = n + 1;
    for (int i = 1; i <= n; ++i) g.intersections.push_back({i - 1, i, true});
  } else if (n == 1) {
    g.loops = 2;
    g.intersections.push_back({0, 1, false});
  } else if (n == 2) {
    g.loops = 2;
    g.intersections = {{0, 1, true}, {0, 1, true}};
  } else {
    g.loops = n;
    for (int i = 0; i < n; ++i) g.intersections.push_back({i, (i + 1) % n, true});
  }
  return g;
}

std::pair<int, int> vertex_edge_count(const PreimageGraph& g) {
  std::vector<int> on_loop(g.loops, 0);
  for (const auto& x : g.intersections) {
    ++on_loop[x.i];
    ++on_loop[x.j];
  }
  int vertices = static_cast<int>(g.intersections.size());
  int edges = 0;
  for (int k : on_loop) {
    if (k == 0) {
      ++vertices;  // a free loop: one vertex, one edge
      ++edges;
    } else {
      edges += k;
    }
  }
  return {vertices, edges};
}

}  // namespace strebel
