#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strebel/acceptance.hpp"
#include "strebel/constructions.hpp"
#include "strebel/diff_spec.hpp"
#include "strebel/errors.hpp"
#include "strebel/json_io.hpp"
#include "strebel/svg.hpp"

using namespace strebel;

namespace {

// sysexits-style codes
constexpr int kExitNotStrebel = 2;
constexpr int kExitUsage = 64;
constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;
constexpr int kExitVerifyFailed = 1;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("error writing '" + path + "'");
}

std::string with_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot) + ext;
  return path + ext;
}

struct Common {
  TraceConfig cfg;
  std::string format;
  std::string out;
};

void add_trace_flags(CLI::App* sc, Common& c) {
  sc->add_option("--step", c.cfg.step, "flat step length")->capture_default_str();
  sc->add_option("--budget", c.cfg.length_budget, "flat length budget per leaf")->capture_default_str();
  sc->add_option("--sing-radius", c.cfg.sing_radius, "capture radius at zeros and simple poles")->capture_default_str();
  sc->add_option("--close-tol", c.cfg.close_tol, "closure tolerance")->capture_default_str();
}

void add_output_flags(CLI::App* sc, Common& c, const std::string& default_format) {
  sc->add_option("--format", c.format, "json, svg or both (default " + default_format + ")")
      ->check(CLI::IsMember({"json", "svg", "both"}));
  sc->add_option("--out", c.out, "output file (stdout if omitted)");
}

std::vector<Trajectory> sample_leaves(const QuadDiff& w, const TraceConfig& cfg, int n) {
  if (n <= 0) return {};
  double lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
  const auto div = divisor(w);
  for (const auto& e : div) {
    if (!e.point.is_finite()) continue;
    lo_x = std::min(lo_x, e.point.value().real());
    hi_x = std::max(hi_x, e.point.value().real());
    lo_y = std::min(lo_y, e.point.value().imag());
    hi_y = std::max(hi_y, e.point.value().imag());
  }
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> ux(lo_x - 0.5, hi_x + 0.5), uy(lo_y - 0.5, hi_y + 0.5);
  const FlowField field(w);
  std::vector<TraceRequest> reqs;
  for (int tries = 0; static_cast<int>(reqs.size()) < n && tries < 100 * n; ++tries) {
    const Complex z(ux(rng), uy(rng));
    bool near = false;
    for (const auto& e : div) near = near || (e.point.is_finite() && std::abs(e.point.value() - z) < 0.05);
    if (near) continue;
    const Complex s = std::sqrt(w.coefficient().raw(z));
    if (!std::isfinite(std::abs(s)) || std::abs(s) == 0.0) continue;
    reqs.push_back({{Chart::Z, z}, std::conj(s) / std::abs(s)});
  }
  TraceConfig leaf_cfg = cfg;
  leaf_cfg.length_budget = std::min(cfg.length_budget, 20.0);
  return trace_all(field, reqs, leaf_cfg);
}

int verdict_code(const CriticalGraph& g) { return g.verdict.kind == VerdictKind::Strebel ? 0 : kExitNotStrebel; }

// Writes json and/or svg according to c.format.
void emit(const Common& c, const Json& report, const QuadDiff* w, const CriticalGraph* g, const SvgOptions& svg_opt) {
  if (c.format == "json") {
    write_output(c.out, dump(report));
    return;
  }
  if (!w || !g) throw DomainError("svg output is not available for this command");
  const std::string svg = render_svg(*w, *g, svg_opt);
  if (c.format == "svg") {
    write_output(c.out, svg);
    return;
  }
  if (c.out.empty() || c.out == "-") throw DomainError("--format both needs --out");
  write_output(with_extension(c.out, ".json"), dump(report));
  write_output(with_extension(c.out, ".svg"), svg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for quadratic differentials on the Riemann sphere"};
  app.require_subcommand(1);
  int code = 0;
  Common common;

  // analyze
  std::string spec;
  auto* analyze = app.add_subcommand("analyze", "divisor, perimeters, Strebel verdict and periods");
  analyze->add_option("spec", spec, "diff-spec, e.g. q1, omega:1,1, rat:[1]/[0,0,1]")->required();
  add_trace_flags(analyze, common);
  add_output_flags(analyze, common, "json");

  // trace
  std::string z0_text, dir_text;
  auto* trace_cmd = app.add_subcommand("trace", "follow one horizontal leaf");
  trace_cmd->add_option("spec", spec, "diff-spec")->required();
  trace_cmd->add_option("--z0", z0_text, "start point, e.g. -0.9 or 0.2+0.1i")->required();
  trace_cmd->add_option("--dir", dir_text, "initial direction (default: the horizontal direction at z0)");
  add_trace_flags(trace_cmd, common);
  add_output_flags(trace_cmd, common, "json");

  // render
  int leaves = 0;
  std::string title;
  auto* render = app.add_subcommand("render", "draw the critical graph as SVG");
  render->add_option("spec", spec, "diff-spec")->required();
  render->add_option("--leaves", leaves, "number of sample noncritical leaves (dashed)");
  render->add_option("--title", title, "caption");
  add_trace_flags(render, common);
  add_output_flags(render, common, "svg");

  // hyper
  std::string r_text;
  std::vector<std::string> extra_text;
  auto* hyper = app.add_subcommand("hyper", "hyperelliptic construction from r and extra branch points");
  hyper->add_option("r", r_text, "real parameter")->required();
  hyper->add_option("points", extra_text, "extra branch points");
  add_trace_flags(hyper, common);
  add_output_flags(hyper, common, "json");

  // elliptic
  std::vector<std::string> pts_text;
  std::string cprime_text = "1";
  int q_bound = 50;
  auto* elliptic = app.add_subcommand("elliptic", "slope test for c' dz^2 / prod (z - a_i)");
  elliptic->add_option("points", pts_text, "four branch points (inf allowed)")->required()->expected(4);
  elliptic->add_option("--c-prime", cprime_text, "coefficient c'")->capture_default_str();
  elliptic->add_option("--q-bound", q_bound, "bound on |m|, |n| for the witness search")->capture_default_str();
  add_output_flags(elliptic, common, "json");

  // cover
  auto* cover = app.add_subcommand("cover", "degree-4 cover: solve for b_i and classify periods");
  cover->add_option("r", r_text, "parameter in (0, 1/2)")->required();
  add_trace_flags(cover, common);
  add_output_flags(cover, common, "json");

  // acceptance checks
  AcceptanceOptions acc;
  double budget = 0.0;
  bool serial = false;
  auto* verify = app.add_subcommand("verify-paper", "run the acceptance checks");
  verify->add_option("--budget", budget, "override the trace length budget");
  verify->add_flag("--perturb-q1", acc.perturb_q1, "negative control: numerator z^2 - z + 1.1");
  verify->add_flag("--serial", serial, "use the serial kernels");
  verify->add_option("--only", acc.only, "run only these criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (common.format.empty()) common.format = *render ? "svg" : "json";

  try {
    if (*analyze) {
      common.cfg.validate();
      const auto d = parse_diff_spec(spec);
      const auto g = critical_graph(d.diff, common.cfg);
      emit(common, analysis_report(d.diff, g), &d.diff, &g, SvgOptions{});
      code = verdict_code(g);
    } else if (*trace_cmd) {
      common.cfg.validate();
      const auto d = parse_diff_spec(spec);
      const Complex z0 = parse_complex(z0_text);
      Complex dir;
      if (dir_text.empty()) {
        const Complex s = std::sqrt(d.diff.coefficient().raw(z0));
        if (!std::isfinite(std::abs(s)) || std::abs(s) == 0.0) throw DomainError("z0 is a zero or pole");
        dir = std::conj(s) / std::abs(s);
      } else {
        dir = parse_complex(dir_text);
      }
      if (common.format != "json") throw DomainError("trace writes json only");
      write_output(common.out, dump(to_json(trace(d.diff, z0, dir, common.cfg))));
    } else if (*render) {
      common.cfg.validate();
      const auto d = parse_diff_spec(spec);
      const auto g = critical_graph(d.diff, common.cfg);
      SvgOptions opt;
      opt.title = title.empty() ? spec : title;
      opt.extra_leaves = sample_leaves(d.diff, common.cfg, leaves);
      emit(common, analysis_report(d.diff, g), &d.diff, &g, opt);
    } else if (*hyper) {
      common.cfg.validate();
      std::vector<SpherePoint> extra;
      for (const auto& t : extra_text) extra.push_back(parse_point(t));
      const Complex r = parse_complex(r_text);
      if (r.imag() != 0.0) throw DomainError("r must be real");
      const auto h = build_hyperelliptic(r.real(), extra);
      const auto g = critical_graph(h.base_diff, common.cfg);
      const Json report{{"hyperelliptic", to_json(h)}, {"base_analysis", analysis_report(h.base_diff, g)}};
      SvgOptions opt;
      opt.title = "hyper r=" + r_text;
      emit(common, report, &h.base_diff, &g, opt);
      code = verdict_code(g);
    } else if (*elliptic) {
      std::array<SpherePoint, 4> pts{parse_point(pts_text[0]), parse_point(pts_text[1]), parse_point(pts_text[2]),
                                     parse_point(pts_text[3])};
      const auto rep = elliptic_strebel_test(pts, parse_complex(cprime_text), q_bound);
      emit(common, to_json(rep), nullptr, nullptr, SvgOptions{});
      code = rep.strebel ? 0 : kExitNotStrebel;
    } else if (*cover) {
      common.cfg.validate();
      const Complex r = parse_complex(r_text);
      if (r.imag() != 0.0) throw DomainError("r must be real");
      const auto sol = cover_solver(r.real());
      const auto rep = verify_cover_periods(sol, common.cfg);
      const Json report{{"solution", to_json(sol)}, {"periods", to_json(rep)}};
      const QuadDiff w = cover_differential(sol);
      SvgOptions opt;
      opt.title = "cover r=" + r_text;
      emit(common, report, &w, &rep.graph, opt);
      code = verdict_code(rep.graph);
    } else if (*verify) {
      if (verify->count("--budget")) acc.length_budget = budget;
      acc.exec = serial ? Exec::Serial : Exec::Parallel;
      std::vector<std::string> failed;
      const auto results = run_acceptance(acc, [](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
      });
      double total = 0.0;
      for (const auto& r : results) {
        total += r.seconds;
        if (!r.pass) failed.push_back(std::to_string(r.id) + " " + r.name);
      }
      std::printf("%zu/%zu checks passed in %.1f s\n", results.size() - failed.size(), results.size(), total);
      for (const auto& f : failed) std::printf("failed: %s\n", f.c_str());
      code = failed.empty() ? 0 : kExitVerifyFailed;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitSoftware;
  }
  return code;
}
