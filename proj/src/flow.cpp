#include "strebel/flow.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "strebel/errors.hpp"

namespace strebel {

namespace {

constexpr double kPi = std::numbers::pi;

Complex unit(Complex v) { return v / std::abs(v); }

// Picks the sign of v that points along ref.
Complex aligned(Complex v, Complex ref) {
  return (v.real() * ref.real() + v.imag() * ref.imag()) >= 0.0 ? v : -v;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Coordinates of p in chart c; nullopt if p is the chart's missing point.
std::optional<Complex> coords_in(const SpherePoint& p, Chart c) {
  if (c == Chart::Z) {
    if (p.is_infinity()) return std::nullopt;
    return p.value();
  }
  if (p.is_infinity()) return Complex(0.0);
  if (p.value() == Complex(0.0)) return std::nullopt;
  return 1.0 / p.value();
}

}  // namespace

void TraceConfig::validate() const {
  if (!(step > 0 && sing_radius > 0 && close_tol > 0 && length_budget > 0 && chart_switch_radius > 0)) {
    throw DomainError("trace config values must be positive");
  }
  if (!(close_tol < sing_radius)) throw DomainError("close_tol must be smaller than sing_radius");
}

SpherePoint ChartPoint::sphere() const {
  if (chart == Chart::Z) return x;
  if (x == Complex(0.0)) return SpherePoint::infinity();
  return 1.0 / x;
}

ChartPoint ChartPoint::from_sphere(const SpherePoint& p, Chart preferred) {
  if (auto c = coords_in(p, preferred)) return {preferred, *c};
  const Chart other = preferred == Chart::Z ? Chart::W : Chart::Z;
  return {other, *coords_in(p, other)};
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::HitSingular: return "HitSingular";
    case Termination::Closed: return "Closed";
    case Termination::BudgetExceeded: return "BudgetExceeded";
    case Termination::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

double model_flat_distance(int order, Complex leading, double euclidean) {
  const double k2 = order + 2.0;
  return 2.0 / k2 * std::sqrt(std::abs(leading)) * std::pow(euclidean, k2 / 2.0);
}

double model_euclidean_radius(int order, Complex leading, double flat) {
  const double k2 = order + 2.0;
  return std::pow(flat * k2 / (2.0 * std::sqrt(std::abs(leading))), 2.0 / k2);
}

FlowField::FlowField(const QuadDiff& w)
    : w_(w), fz_(w.coefficient()), fw_(chart_at_infinity(w.coefficient())) {
  for (const auto& e : divisor(w)) {
    const LocalModel lm = local_model(w, e);
    const RationalFn& f = e.point.is_infinity() ? fw_ : fz_;
    const Complex p = e.point.is_infinity() ? Complex(0.0) : e.point.value();
    Singular s{e.point, e.order, lm.leading, f.num(), f.den()};
    for (int k = 0; k < e.order; ++k) s.num_hat = s.num_hat.deflate(p);
    for (int k = 0; k < -e.order; ++k) s.den_hat = s.den_hat.deflate(p);
    if (e.order >= -1) {
      sing_.push_back(std::move(s));
    } else if (e.order == -2) {
      doubles_.push_back(std::move(s));
    }
  }
}

Complex FlowField::eval_near(const Singular& s, Complex x) {
  const Complex p = s.point.is_infinity() ? Complex(0.0) : s.point.value();
  return std::pow(x, s.order) * s.num_hat(p + x) / s.den_hat(p + x);
}

const FlowField::Singular* FlowField::find(const SpherePoint& p) const {
  for (const auto* list : {&sing_, &doubles_}) {
    for (const auto& s : *list) {
      if (chordal_distance(s.point, p) < 1e-12) return &s;
    }
  }
  return nullptr;
}

Complex FlowField::eval(Chart c, Complex x) const {
  return c == Chart::Z ? fz_.raw(x) : fw_.raw(x);
}

std::pair<double, int> FlowField::nearest_singular(const ChartPoint& q) const {
  double best = std::numeric_limits<double>::infinity();
  int idx = -1;
  const SpherePoint qs = q.sphere();
  for (size_t i = 0; i < sing_.size(); ++i) {
    const auto& s = sing_[i];
    const Chart home = s.point.is_infinity() ? Chart::W : Chart::Z;
    const auto qc = coords_in(qs, home);
    if (!qc) continue;
    const Complex p = s.point.is_infinity() ? Complex(0.0) : s.point.value();
    const double d = model_flat_distance(s.order, s.leading, std::abs(*qc - p));
    if (d < best) {
      best = d;
      idx = static_cast<int>(i);
    }
  }
  return {best, idx};
}

namespace {

class Tracer {
 public:
  Tracer(const FlowField& field, const TraceConfig& cfg, const TraceOptions& opt)
      : field_(field), cfg_(cfg), opt_(opt), sign_(opt.vertical ? -1.0 : 1.0) {}

  Complex F(Chart c, Complex x) const { return sign_ * field_.eval(c, x); }

  // Unit-flat-speed field aligned with ref.
  Complex velocity(Chart c, Complex x, Complex ref) const {
    return aligned(1.0 / std::sqrt(F(c, x)), ref);
  }

  Trajectory run(ChartPoint cur, Complex dir) const {
    Trajectory out;
    const double R = cfg_.chart_switch_radius;
    {
      const Complex f0 = F(cur.chart, cur.x);
      if (!finite(f0) || !((f0 * dir * dir).real() > 0.0)) {
        throw DomainError("start direction is not horizontal");
      }
      if (field_.nearest_singular(cur).first <= cfg_.sing_radius) {
        throw DomainError("start point lies inside the capture radius");
      }
    }
    dir = unit(dir);
    out.start_direction = dir;
    out.points.push_back(cur);

    const ChartPoint start = cur;
    Complex ref = unit(velocity(cur.chart, cur.x, dir));
    const Complex dir0 = ref;
    const Complex sqrtF0 = 1.0 / velocity(cur.chart, cur.x, dir);
    double s = 0.0;
    double prev_u = std::numeric_limits<double>::quiet_NaN();
    const long max_steps = static_cast<long>(20.0 * cfg_.length_budget / cfg_.step) + 10000;

    for (long n = 0;; ++n) {
      const auto [d, idx] = field_.nearest_singular(cur);
      if (d < cfg_.sing_radius) {
        const auto& sp = field_.singular()[idx];
        out.termination = Termination::HitSingular;
        out.hit = sp.point;
        out.flat_length = s + d;
        out.points.push_back(ChartPoint::from_sphere(sp.point, cur.chart));
        return out;
      }
      if (opt_.double_pole_capture > 0.0) {
        for (const auto& dp : field_.double_poles()) {
          if (chordal_distance(cur.sphere(), dp.point) < opt_.double_pole_capture) {
            out.termination = Termination::HitSingular;
            out.hit = dp.point;
            out.flat_length = s;
            return out;
          }
        }
      }
      if (s >= cfg_.length_budget || n >= max_steps) {
        out.termination = Termination::BudgetExceeded;
        out.flat_length = s;
        return out;
      }

      const double h = std::min(cfg_.step, 0.1 * d);
      const Chart c = cur.chart;
      const Complex x = cur.x;
      const Complex k1 = velocity(c, x, ref);
      const Complex k2 = velocity(c, x + 0.5 * h * k1, ref);
      const Complex k3 = velocity(c, x + 0.5 * h * k2, ref);
      const Complex k4 = velocity(c, x + h * k3, ref);
      const Complex xn = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const Complex vn = velocity(c, xn, ref);
      if (!finite(xn) || !finite(vn) || !finite(k1 + k2 + k3 + k4)) {
        out.termination = Termination::NumericalFailure;
        out.flat_length = s;
        out.diagnostic = "non-finite state";
        return out;
      }
      const Complex un = unit(vn);
      if ((un * std::conj(ref)).real() < 1e-3) {
        out.termination = Termination::NumericalFailure;
        out.flat_length = s;
        out.diagnostic = "direction jump of a right angle or more in one step";
        return out;
      }
      s += h;
      cur.x = xn;
      ref = un;

      if (cur.chart == start.chart && s > 4.0 * cfg_.step &&
          std::abs(sqrtF0) * std::abs(xn - start.x) < 2.0 * cfg_.step) {
        const Complex U = local_flat_coordinate(start, sqrtF0, xn);
        const bool crossed = std::isfinite(prev_u) && prev_u < 0.0 && U.real() >= 0.0;
        prev_u = U.real();
        // direction where the leaf meets the start's vertical, not at xn
        const Complex xc = xn - U.real() * vn;
        if (crossed && std::abs(U.imag()) < cfg_.close_tol &&
            std::abs(std::arg(unit(velocity(c, xc, ref)) / dir0)) < 1e-3) {
          out.termination = Termination::Closed;
          out.flat_length = s - U.real();
          out.points.push_back(start);
          return out;
        }
      } else {
        prev_u = std::numeric_limits<double>::quiet_NaN();
      }

      if (cur.chart == Chart::Z && std::abs(cur.x) > R) {
        const Complex z = cur.x;
        cur = {Chart::W, 1.0 / z};
        ref = unit(-ref / (z * z));
      } else if (cur.chart == Chart::W && std::abs(cur.x) > 2.0 / R) {
        const Complex w = cur.x;
        cur = {Chart::Z, 1.0 / w};
        ref = unit(-ref / (w * w));
      }
      out.points.push_back(cur);
    }
  }

 private:
  // Integral of sqrt(F) from the start point to x on the straight segment,
  // branch continued from sqrtF0 (three-point Gauss).
  Complex local_flat_coordinate(const ChartPoint& start, Complex sqrtF0, Complex x) const {
    static const double nodes[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const Complex dx = x - start.x;
    Complex acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Complex y = start.x + 0.5 * (1.0 + nodes[i]) * dx;
      Complex r = std::sqrt(F(start.chart, y));
      if ((r * std::conj(sqrtF0)).real() < 0.0) r = -r;
      acc += weights[i] * r;
    }
    return 0.5 * acc * dx;
  }

  const FlowField& field_;
  const TraceConfig& cfg_;
  const TraceOptions& opt_;
  double sign_;
};

}  // namespace

Trajectory trace(const FlowField& field, const ChartPoint& start, Complex dir,
                 const TraceConfig& cfg, const TraceOptions& opt) {
  cfg.validate();
  if (!finite(start.x) || !finite(dir) || std::abs(dir) == 0.0) {
    throw DomainError("start point and direction must be finite, direction nonzero");
  }
  return Tracer(field, cfg, opt).run(start, dir);
}

Trajectory trace(const QuadDiff& w, Complex z0, Complex dir, const TraceConfig& cfg) {
  const FlowField field(w);
  return trace(field, ChartPoint{Chart::Z, z0}, dir, cfg);
}

std::vector<Trajectory> trace_all(const FlowField& field, const std::vector<TraceRequest>& reqs,
                                  const TraceConfig& cfg, const TraceOptions& opt) {
  cfg.validate();
  std::vector<Trajectory> out(reqs.size());
  std::vector<std::string> errors(reqs.size());
  const long n = static_cast<long>(reqs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = trace(field, reqs[i].start, reqs[i].dir, cfg, opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw DomainError(e);
  }
  return out;
}

std::vector<Trajectory> trace_all_serial(const FlowField& field,
                                         const std::vector<TraceRequest>& reqs,
                                         const TraceConfig& cfg, const TraceOptions& opt) {
  std::vector<Trajectory> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) out.push_back(trace(field, r.start, r.dir, cfg, opt));
  return out;
}

namespace {

double segment_point_distance(Complex a, Complex b, Complex p) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * ab - p);
}

}  // namespace

double flat_length(const QuadDiff& w, const std::vector<Complex>& path, double sing_radius) {
  using boost::math::quadrature::gauss_kronrod;
  const RationalFn& f = w.coefficient();
  std::vector<Complex> poles;
  if (f.den().degree() >= 1) {
    for (const auto& r : roots(f.den())) poles.push_back(r.z);
  }
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Complex a = path[i], b = path[i + 1];
    for (const auto& p : poles) {
      if (segment_point_distance(a, b, p) < sing_radius) {
        throw DomainError("path passes too close to a pole");
      }
    }
    const double len = std::abs(b - a);
    if (len == 0.0) continue;
    // t = u^2/2 near a and t = 1 - u^2/2 near b tame endpoint zeros.
    auto near_a = [&](double u) { return std::sqrt(std::abs(f.raw(a + 0.5 * u * u * (b - a)))) * u; };
    auto near_b = [&](double u) {
      return std::sqrt(std::abs(f.raw(b - 0.5 * u * u * (b - a)))) * u;
    };
    const double ia = gauss_kronrod<double, 15>::integrate(near_a, 0.0, 1.0, 20, 1e-12);
    const double ib = gauss_kronrod<double, 15>::integrate(near_b, 0.0, 1.0, 20, 1e-12);
    total += len * (ia + ib);
  }
  return total;
}

std::vector<Complex> critical_directions(const QuadDiff& w, const SpherePoint& p) {
  int order = 0;
  SpherePoint at = p;
  for (const auto& e : divisor(w)) {
    if (chordal_distance(e.point, p) < 1e-8) {
      order = e.order;
      at = e.point;
    }
  }
  if (order <= -2) throw DomainError("no critical directions at a pole of order two or more");
  const LocalModel lm = local_model(w, DivisorEntry{at, order});
  std::vector<Complex> dirs;
  const int k2 = order + 2;
  for (int j = 0; j < k2; ++j) dirs.push_back(std::polar(1.0, (2.0 * kPi * j - std::arg(lm.leading)) / k2));
  return dirs;
}

}  // namespace strebel
