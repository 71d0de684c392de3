#include "strebel/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace strebel {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

namespace {

Json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

const char* chart_name(Chart c) { return c == Chart::Z ? "z" : "w"; }

Json polyline_json(const std::vector<ChartPoint>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(to_json(p));
  return arr;
}

}  // namespace

Json to_json(Complex z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

Json to_json(const SpherePoint& p) { return p.is_infinity() ? Json("inf") : to_json(p.value()); }

Json to_json(const ChartPoint& p) {
  return {{"chart", chart_name(p.chart)}, {"re", num(p.x.real())}, {"im", num(p.x.imag())}};
}

Json to_json(const std::vector<DivisorEntry>& divisor) {
  Json arr = Json::array();
  for (const auto& e : divisor) arr.push_back({{"point", to_json(e.point)}, {"order", e.order}});
  return arr;
}

Json to_json(const Trajectory& t) {
  Json j{{"termination", to_string(t.termination)},
         {"flat_length", num(t.flat_length)},
         {"start_direction", to_json(t.start_direction)},
         {"points", polyline_json(t.points)}};
  j["hit"] = t.hit ? to_json(*t.hit) : Json(nullptr);
  if (!t.diagnostic.empty()) j["diagnostic"] = t.diagnostic;
  return j;
}

Json to_json(const CriticalGraph& g) {
  Json verts = Json::array();
  for (const auto& v : g.vertices) verts.push_back({{"point", to_json(v.point)}, {"order", v.order}});
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"angle", num(e.angle)},
                     {"length", num(e.length)},
                     {"termination", to_string(e.trajectory.termination)},
                     {"polyline", polyline_json(e.polyline)}});
  }
  return {{"vertices", verts},
          {"edges", edges},
          {"verdict", {{"kind", to_string(g.verdict.kind)}, {"edges", g.verdict.edges}, {"diagnostic", g.verdict.diagnostic}}},
          {"config",
           {{"step", num(g.cfg.step)},
            {"sing_radius", num(g.cfg.sing_radius)},
            {"close_tol", num(g.cfg.close_tol)},
            {"length_budget", num(g.cfg.length_budget)},
            {"chart_switch_radius", num(g.cfg.chart_switch_radius)}}}};
}

Json to_json(const PeriodTable& t) {
  Json arr = Json::array();
  for (const auto& p : t.entries) {
    arr.push_back({{"edge", p.edge}, {"from", p.from}, {"to", p.to}, {"length", num(p.length)}, {"orientation", p.orientation}});
  }
  return arr;
}

Json to_json(const HyperellipticSpec& h) {
  Json extra = Json::array();
  for (const auto& p : h.extra_branch) extra.push_back(to_json(p));
  Json cert = Json::array();
  for (const auto& c : h.certificate) {
    cert.push_back({{"point", to_json(c.point)},
                    {"ramification", c.ramification},
                    {"base_order", c.base_order},
                    {"pulled_order", c.pulled_order}});
  }
  const size_t nb = h.extra_branch.size() + 4;
  Json genus = nb % 2 == 0 ? Json(nb / 2 - 1) : Json(nullptr);
  return {{"r", num(h.r)},
          {"a", num(h.a)},
          {"b", num(h.b)},
          {"extra_branch", extra},
          {"genus", genus},
          {"base_divisor", to_json(divisor(h.base_diff))},
          {"certificate", cert},
          {"total_degree", h.total_degree}};
}

Json to_json(const EllipticSlopeReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.branch_points) pts.push_back(to_json(p));
  Json j{{"branch_points", pts},
         {"omega1", to_json(r.omega1)},
         {"omega2", to_json(r.omega2)},
         {"tau", to_json(r.tau)},
         {"c_prime", to_json(r.c_prime)},
         {"direction", num(r.direction)},
         {"Q", r.Q},
         {"strebel", r.strebel}};
  j["rational_witness"] = r.rational_witness ? Json::array({r.rational_witness->first, r.rational_witness->second}) : Json(nullptr);
  return j;
}

Json to_json(const CoverSolution& s) {
  return {{"r", num(s.r)},
          {"b1", to_json(s.b1)},
          {"b2", to_json(s.b2)},
          {"b3", to_json(s.b3)},
          {"c0", to_json(s.c0)},
          {"c1", to_json(s.c1)},
          {"c2", to_json(s.c2)},
          {"c3", to_json(s.c3)},
          {"c", to_json(s.c)},
          {"targets", Json::array({to_json(s.a[0]), to_json(s.a[1]), to_json(s.a[2])})},
          {"residual", num(s.residual)},
          {"converged_starts", s.converged_starts}};
}

Json to_json(const CoverPeriodReport& r) {
  Json periods = Json::array();
  for (const auto& p : r.periods) {
    periods.push_back({{"value", num(p.value)}, {"class", p.label}, {"from", p.from}, {"to", p.to}});
  }
  Json perims = Json::array();
  for (const auto& p : r.perimeters) {
    perims.push_back({{"pole", to_json(p.pole)}, {"perimeter", num(p.perimeter)}, {"multiple", num(p.multiple)}});
  }
  return {{"L", num(r.L)},
          {"periods", periods},
          {"perimeters", perims},
          {"verdict", to_string(r.graph.verdict.kind)},
          {"all_in_L_classes", r.all_in_L_classes}};
}

Json analysis_report(const QuadDiff& w, const CriticalGraph& g) {
  const auto div = divisor(w);
  Json perims = Json::array();
  for (const auto& e : div) {
    if (e.order != -2) continue;
    const PoleData pd = pole_perimeter(w, e.point);
    perims.push_back({{"pole", to_json(e.point)}, {"perimeter", num(pd.perimeter)}, {"c_minus_2", to_json(pd.c_minus_2)}});
  }
  Json j{{"divisor", to_json(div)},
         {"perimeters", perims},
         {"verdict", {{"kind", to_string(g.verdict.kind)}, {"edges", g.verdict.edges}, {"diagnostic", g.verdict.diagnostic}}},
         {"edges", g.edges.size()}};
  j["periods"] = g.verdict.kind == VerdictKind::Strebel ? to_json(periods(g, w)) : Json(nullptr);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace strebel
