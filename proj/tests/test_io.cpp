#include <cmath>

#include "doctest.h"
#include "strebel/diff_spec.hpp"
#include "strebel/errors.hpp"
#include "strebel/json_io.hpp"
#include "strebel/svg.hpp"

using namespace strebel;

TEST_CASE("complex literals") {
  CHECK(parse_complex("1.5") == Complex(1.5, 0.0));
  CHECK(parse_complex("-2") == Complex(-2.0, 0.0));
  CHECK(parse_complex("2i") == Complex(0.0, 2.0));
  CHECK(parse_complex("-i") == Complex(0.0, -1.0));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("0.5+0.25i") == Complex(0.5, 0.25));
  CHECK(parse_complex("1e-3-2.5e1i") == Complex(1e-3, -25.0));
  CHECK(parse_complex(" 3 - i ") == Complex(3.0, -1.0));
  CHECK(parse_point("inf").is_infinity());
  for (const char* bad : {"", "abc", "1+", "1+2", "i2", "1..2", "1e999"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_complex(bad), DomainError);
  }
}

TEST_CASE("diff-spec parsing") {
  const auto q = parse_diff_spec("q1");
  CHECK(q.kind == "q1");
  CHECK(std::abs(q.diff.coefficient().raw(Complex(0.3, 0.2)) - make_q1().coefficient().raw(Complex(0.3, 0.2))) < 1e-15);

  const auto om = parse_diff_spec("omega:1,2");
  CHECK(divisor(om.diff).size() == 4);

  const auto h = parse_diff_spec("hyper:0.25;2,3+i");
  REQUIRE(h.hyper.has_value());
  CHECK(h.hyper->extra_branch.size() == 2);
  CHECK(parse_diff_spec("hyper:0").hyper->extra_branch.empty());

  const auto el = parse_diff_spec("elliptic:0,1,-1,inf;2");
  const auto d = divisor(el.diff);
  CHECK(d.size() == 4);
  for (const auto& e : d) CHECK(e.order == -1);
  CHECK(std::abs(el.diff.coefficient().raw(2.0) - 2.0 / (2.0 * 1.0 * 3.0)) < 1e-14);

  // coefficients from the constant term up; common factors cancel
  const auto rat = parse_diff_spec("rat:[-1,1]/[0,-1,1]");
  CHECK(std::abs(rat.diff.coefficient().raw(0.7) - 1.0 / 0.7) < 1e-12);
  CHECK(divisor(rat.diff).size() == 2);

  for (const char* bad : {"", "q2", "q1:3", "omega:1", "omega:1,i", "hyper:", "elliptic:0,1,2;1", "elliptic:0,1,1,2;1",
                          "elliptic:0,1,2,3;0", "rat:[1]", "rat:[0]/[1]", "rat:[1]/[0]", "rat:1/2", "cover:0.7"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_diff_spec(bad, Exec::Serial), DomainError);
  }
}

TEST_CASE("json formatting") {
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
  CHECK(round12(0.0) == 0.0);
  CHECK(round12(-0.0) == 0.0);
  const Json j{{"b", round12(2.0 / 3.0)}, {"a", 1}};
  CHECK(dump(j) == "{\n  \"a\": 1,\n  \"b\": 0.666666666667\n}\n");
  CHECK(to_json(SpherePoint::infinity()) == Json("inf"));
  CHECK(to_json(Complex(1.0, -2.0)) == Json{{"re", 1.0}, {"im", -2.0}});

  const auto w = make_q1();
  const auto g = critical_graph(w, TraceConfig{}, Exec::Serial);
  const Json rep = analysis_report(w, g);
  CHECK(rep["verdict"]["kind"] == "Strebel");
  REQUIRE(rep["periods"].size() == 3);
  for (const auto& p : rep["periods"]) CHECK(p["length"].get<double>() == 1.0);
  CHECK(rep["perimeters"].size() == 3);
  CHECK(dump(rep) == dump(analysis_report(w, critical_graph(w, TraceConfig{}, Exec::Parallel))));
}

TEST_CASE("svg output") {
  const auto w = make_q1();
  const auto g = critical_graph(w, TraceConfig{});
  SvgOptions opt;
  opt.title = "q1 <test>";
  const std::string svg = render_svg(w, g, opt);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("class=\"zero\"") != std::string::npos);
  CHECK(svg.find("class=\"double-pole\"") != std::string::npos);
  CHECK(svg.find("q1 &lt;test&gt;") != std::string::npos);
  CHECK(svg.find("open-edge\" points") == std::string::npos);

  TraceConfig tight;
  tight.length_budget = 0.1;
  const auto cut = critical_graph(w, tight);
  CHECK(render_svg(w, cut).find("class=\"open-edge\"") != std::string::npos);

  const auto fam = make_four_pole_family(1.0, 1.0);
  const std::string s2 = render_svg(fam, critical_graph(fam, TraceConfig{}));
  CHECK(s2.find("class=\"simple-pole\"") != std::string::npos);
  CHECK(s2.find("to &#8734;") != std::string::npos);
}
