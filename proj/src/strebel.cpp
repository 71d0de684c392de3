#include "strebel/strebel.hpp"

#include <algorithm>
#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "strebel/errors.hpp"

namespace strebel {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;

const double kGaussX[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                           0.9061798459386640};
const double kGaussW[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                           0.4786286704993665, 0.2369268850561891};

Complex sqrt_along(Complex f, Complex dir) {
  const Complex r = std::sqrt(f);
  return (r * dir).real() >= 0.0 ? r : -r;
}

// Coordinates of both points in a chart that contains both.
std::pair<Chart, std::pair<Complex, Complex>> common_chart(const ChartPoint& a, const ChartPoint& b,
                                                          std::optional<Chart> first = std::nullopt) {
  for (Chart c : {first.value_or(a.chart), a.chart, b.chart}) {
    const ChartPoint pa = ChartPoint::from_sphere(a.sphere(), c);
    const ChartPoint pb = ChartPoint::from_sphere(b.sphere(), c);
    if (pa.chart == c && pb.chart == c) return {c, {pa.x, pb.x}};
  }
  throw NumericalError("segment spans both chart poles");
}

// sqrt(f) integrated from p along p + d u^2 for u in [0, 1]. When p is a
// singular point the factored local form is used.
Complex endpoint_integral(const FlowField& F, Chart c, Complex p, Complex d,
                          const FlowField::Singular* at = nullptr) {
  auto g = [&](double u) {
    const Complex x = d * u * u;
    const Complex f = at ? FlowField::eval_near(*at, x) : F.eval(c, p + x);
    return sqrt_along(f, d) * 2.0 * d * u;
  };
  return gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 12, 1e-13);
}

Complex interior_integral(const FlowField& F, Chart c, Complex a, Complex b) {
  const Complex d = b - a;
  Complex acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGaussW[i] * sqrt_along(F.eval(c, a + 0.5 * (1.0 + kGaussX[i]) * d), d);
  return 0.5 * acc * d;
}

double normalized_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

struct Seed {
  int vertex;
  double angle;
  ChartPoint start;
  Complex dir;
};

// Places a seed on the critical leaf: flat offset 2 sing_radius along the
// model direction, then the angle is corrected so Im of the flat coordinate vanishes.
Seed make_seed(const FlowField& F, const FlowField::Singular& s, int vertex, double theta,
               const TraceConfig& cfg) {
  const Chart c = s.point.is_infinity() ? Chart::W : Chart::Z;
  const Complex p = s.point.is_infinity() ? Complex(0.0) : s.point.value();
  const double r = model_euclidean_radius(s.order, s.leading, 2.0 * cfg.sing_radius);
  auto im_u = [&](double th) { return endpoint_integral(F, c, p, std::polar(r, th), &s).imag(); };
  double th = theta;
  double cur = im_u(th);
  for (int it = 0; it < 6 && std::abs(cur) > 1e-15; ++it) {
    const double h = 1e-7;
    const double slope = (im_u(th + h) - im_u(th - h)) / (2.0 * h);
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double next = th - cur / slope;
    if (std::abs(next - theta) > 0.1) break;
    const double val = im_u(next);
    if (std::abs(val) >= std::abs(cur)) break;
    th = next;
    cur = val;
  }
  return {vertex, theta, {c, p + std::polar(r, th)}, std::polar(1.0, th)};
}

int vertex_index(const std::vector<DivisorEntry>& vs, const SpherePoint& p) {
  for (size_t i = 0; i < vs.size(); ++i) {
    if (chordal_distance(vs[i].point, p) < 1e-9) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Strebel: return "Strebel";
    case VerdictKind::NotStrebelWitness: return "NotStrebelWitness";
    case VerdictKind::Undecided: return "Undecided";
  }
  return "?";
}

Complex period_integral(const FlowField& F, const std::vector<ChartPoint>& polyline) {
  const size_t n = polyline.size();
  Complex total = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) {
    const auto* sa = i == 0 ? F.find(polyline[i].sphere()) : nullptr;
    const auto* sb = i + 2 == n ? F.find(polyline[i + 1].sphere()) : nullptr;
    // local forms live in the singular point's own chart
    std::optional<Chart> own;
    if (const auto* s = sa ? sa : sb) own = s->point.is_infinity() ? Chart::W : Chart::Z;
    if (sa && sb && sa->point.is_infinity() != sb->point.is_infinity()) {
      throw NumericalError("segment joins zero-chart and infinity-chart singular points");
    }
    const auto [c, ab] = common_chart(polyline[i], polyline[i + 1], own);
    const auto [a, b] = ab;
    const Complex d = b - a;
    if (d == Complex(0.0)) continue;
    if (n == 2) {
      const Complex m = 0.5 * (a + b);
      total += endpoint_integral(F, c, a, m - a, sa) + endpoint_integral(F, c, b, m - b, sb);
    } else if (i == 0) {
      total += endpoint_integral(F, c, a, d, sa);
    } else if (i + 2 == n) {
      total += endpoint_integral(F, c, b, -d, sb);
    } else {
      total += interior_integral(F, c, a, b);
    }
  }
  return total;
}

Complex period_integral(const QuadDiff& w, const std::vector<ChartPoint>& polyline) {
  return period_integral(FlowField(w), polyline);
}

double hausdorff(const std::vector<ChartPoint>& a, const std::vector<ChartPoint>& b) {
  // distances between polylines on the unit sphere, segments taken as chords
  auto embed = [](const std::vector<ChartPoint>& v) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(v.size());
    for (const auto& p : v) {
      const SpherePoint s = p.sphere();
      if (s.is_infinity()) {
        out.emplace_back(0.0, 0.0, 1.0);
        continue;
      }
      const Complex z = s.value();
      const double d = 1.0 + std::norm(z);
      out.emplace_back(2.0 * z.real() / d, 2.0 * z.imag() / d, (std::norm(z) - 1.0) / d);
    }
    return out;
  };
  const auto sa = embed(a), sb = embed(b);
  auto to_polyline = [](const Eigen::Vector3d& p, const std::vector<Eigen::Vector3d>& y) {
    double best = std::numeric_limits<double>::infinity();
    if (y.size() == 1) return (p - y[0]).norm();
    for (size_t k = 0; k + 1 < y.size(); ++k) {
      const Eigen::Vector3d d = y[k + 1] - y[k];
      const double len2 = d.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((p - y[k]).dot(d) / len2, 0.0, 1.0) : 0.0;
      best = std::min(best, (p - y[k] - t * d).norm());
    }
    return best;
  };
  auto directed = [&](const std::vector<Eigen::Vector3d>& x, const std::vector<Eigen::Vector3d>& y) {
    double worst = 0.0;
    for (const auto& p : x) worst = std::max(worst, to_polyline(p, y));
    return worst;
  };
  if (sa.empty() || sb.empty()) return sa.empty() && sb.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  return std::max(directed(sa, sb), directed(sb, sa));
}

std::vector<GraphEdge> dedup_edges(const std::vector<GraphEdge>& edges, double tol) {
  std::vector<GraphEdge> kept;
  for (const auto& e : edges) {
    bool dup = false;
    if (e.to >= 0) {
      for (const auto& k : kept) {
        const bool same_ends = (k.from == e.from && k.to == e.to) || (k.from == e.to && k.to == e.from);
        if (same_ends && hausdorff(k.polyline, e.polyline) < tol) {
          dup = true;
          break;
        }
      }
    }
    if (!dup) kept.push_back(e);
  }
  return kept;
}

CriticalGraph critical_graph(const QuadDiff& w, const TraceConfig& cfg, Exec exec) {
  cfg.validate();
  for (const auto& e : divisor(w)) {
    if (e.order <= -3) throw DomainError("not a Strebel candidate");
  }
  const FlowField field(w);
  CriticalGraph g;
  g.cfg = cfg;
  for (const auto& s : field.singular()) g.vertices.push_back({s.point, s.order});

  std::vector<Seed> seeds;
  for (size_t i = 0; i < field.singular().size(); ++i) {
    const auto& s = field.singular()[i];
    const int k2 = s.order + 2;
    for (int j = 0; j < k2; ++j) {
      const double theta = (2.0 * kPi * j - std::arg(s.leading)) / k2;
      seeds.push_back(make_seed(field, s, static_cast<int>(i), theta, cfg));
    }
  }
  std::vector<TraceRequest> reqs;
  for (const auto& s : seeds) reqs.push_back({s.start, s.dir});
  const auto trajs = exec == Exec::Parallel ? trace_all(field, reqs, cfg) : trace_all_serial(field, reqs, cfg);

  std::vector<GraphEdge> edges;
  for (size_t i = 0; i < seeds.size(); ++i) {
    GraphEdge e;
    e.trajectory = trajs[i];
    e.from = seeds[i].vertex;
    e.angle = normalized_angle(seeds[i].angle);
    e.polyline.push_back(ChartPoint::from_sphere(g.vertices[e.from].point, seeds[i].start.chart));
    e.polyline.insert(e.polyline.end(), trajs[i].points.begin(), trajs[i].points.end());
    if (trajs[i].termination == Termination::HitSingular) {
      e.to = vertex_index(g.vertices, *trajs[i].hit);
      e.length = period_integral(field, e.polyline).real();
    } else {
      e.length = trajs[i].flat_length + 2.0 * cfg.sing_radius;
    }
    edges.push_back(std::move(e));
  }
  std::stable_sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return a.from != b.from ? a.from < b.from : a.angle < b.angle;
  });
  g.edges = dedup_edges(edges, 10.0 * cfg.step);

  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto t = g.edges[i].trajectory.termination;
    if (t == Termination::BudgetExceeded || t == Termination::NumericalFailure) {
      g.verdict.kind = VerdictKind::Undecided;
      g.verdict.edges.push_back(static_cast<int>(i));
      if (!g.verdict.diagnostic.empty()) g.verdict.diagnostic += "; ";
      g.verdict.diagnostic += "edge " + std::to_string(i) + ": " + to_string(t);
      if (!g.edges[i].trajectory.diagnostic.empty()) g.verdict.diagnostic += " (" + g.edges[i].trajectory.diagnostic + ")";
    }
  }
  if (g.verdict.kind == VerdictKind::Undecided &&
      std::any_of(g.edges.begin(), g.edges.end(),
                  [](const GraphEdge& e) { return e.trajectory.termination == Termination::BudgetExceeded; })) {
    g.verdict.diagnostic += "; length budget " + std::to_string(cfg.length_budget) + " exhausted";
  }
  return g;
}

PeriodTable periods(const CriticalGraph& g, const QuadDiff& w) {
  (void)w;
  if (g.verdict.kind != VerdictKind::Strebel) throw DomainError("periods need a Strebel verdict");
  PeriodTable t;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.to < 0 || g.vertices[e.from].order < 1 || g.vertices[e.to].order < 1) continue;
    t.entries.push_back({static_cast<int>(i), e.from, e.to, e.length, e.orientation});
  }
  return t;
}

std::vector<PoleBoundary> pole_boundaries(const CriticalGraph& g, const QuadDiff& w) {
  const FlowField field(w);
  std::vector<PoleBoundary> out;
  for (const auto& dp : field.double_poles()) {
    out.push_back({dp.point, pole_perimeter(w, dp.point).perimeter, {}, 0.0});
  }
  TraceConfig vcfg = g.cfg;
  TraceOptions opt;
  opt.vertical = true;
  opt.double_pole_capture = 1e-3;

  std::vector<TraceRequest> reqs;
  std::vector<std::pair<int, int>> sides;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.to < 0 || e.polyline.size() < 3) continue;
    const size_t m = e.polyline.size() / 2;
    const ChartPoint mid = e.polyline[m];
    const ChartPoint next = ChartPoint::from_sphere(e.polyline[m + 1].sphere(), mid.chart);
    const Complex f = field.eval(mid.chart, mid.x);
    Complex v = 1.0 / std::sqrt(f);
    if ((v * std::conj(next.x - mid.x)).real() < 0.0) v = -v;
    v /= std::abs(v);
    for (int side : {1, -1}) {
      reqs.push_back({mid, Complex(0.0, side) * v});
      sides.push_back({static_cast<int>(i), side});
    }
  }
  const auto trajs = trace_all(field, reqs, vcfg, opt);
  for (size_t k = 0; k < trajs.size(); ++k) {
    if (trajs[k].termination != Termination::HitSingular) continue;
    for (auto& pb : out) {
      if (chordal_distance(pb.pole, *trajs[k].hit) < 1e-9) {
        pb.sides.push_back(sides[k]);
        pb.boundary_length += g.edges[sides[k].first].length;
      }
    }
  }
  return out;
}

double ell(const QuadDiff& w, Complex c) {
  const double top = std::sqrt(3.0) / 2.0;
  if (std::abs(c.real() - 0.5) > 1e-9 || std::abs(c.imag()) > top + 1e-9) {
    throw DomainError("point is not on the segment between the zeros");
  }
  const Complex zero(0.5, top);
  if (std::abs(c - zero) == 0.0) return 0.0;
  return flat_length(w, {c, zero});
}

}  // namespace strebel
