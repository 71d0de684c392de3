#include "strebel/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace strebel {

namespace {

struct Frame {
  double xmin, ymax, span;
  int w, h;

  bool inside(Complex z) const {
    return z.real() >= xmin && z.real() <= xmin + span && z.imag() <= ymax && z.imag() >= ymax - span;
  }
  std::string px(Complex z) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", (z.real() - xmin) / span * w, (ymax - z.imag()) / span * h);
    return buf;
  }
  std::pair<double, double> xy(Complex z) const { return {(z.real() - xmin) / span * w, (ymax - z.imag()) / span * h}; }
};

std::optional<Complex> to_plane(const ChartPoint& p) {
  if (p.chart == Chart::Z) return p.x;
  if (p.x == Complex(0.0)) return std::nullopt;
  return 1.0 / p.x;
}

// Polyline pieces, broken wherever the curve runs far outside the frame
// (through infinity) so no spurious chords are drawn.
std::vector<std::vector<Complex>> pieces(const std::vector<ChartPoint>& pts, const Frame& f) {
  const Complex centre(f.xmin + 0.5 * f.span, f.ymax - 0.5 * f.span);
  const double far = 20.0 * f.span;
  std::vector<std::vector<Complex>> out(1);
  for (const auto& p : pts) {
    const auto z = to_plane(p);
    if (!z || std::abs(*z - centre) > far) {
      if (!out.back().empty()) out.emplace_back();
      continue;
    }
    out.back().push_back(*z);
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

void polyline(std::ostringstream& os, const std::vector<Complex>& zs, const Frame& f, const char* cls) {
  if (zs.size() < 2) return;
  os << "  <polyline class=\"" << cls << "\" points=\"";
  for (size_t i = 0; i < zs.size(); ++i) os << (i ? " " : "") << f.px(zs[i]);
  os << "\"/>\n";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const QuadDiff& w, const CriticalGraph& g, const SvgOptions& opt) {
  const auto div = divisor(w);
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](Complex z) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  };
  for (const auto& e : div) {
    if (e.point.is_finite()) grow(e.point.value());
  }
  for (const auto& e : g.edges) {
    for (const auto& p : e.polyline) {
      if (p.chart == Chart::Z && std::abs(p.x) <= g.cfg.chart_switch_radius) grow(p.x);
    }
  }
  if (!std::isfinite(xmin)) xmin = xmax = ymin = ymax = 0.0;
  const double extent = std::max({xmax - xmin, ymax - ymin, 1.0});
  const double span = 1.3 * extent;
  const Frame f{0.5 * (xmin + xmax) - 0.5 * span, 0.5 * (ymin + ymax) + 0.5 * span, span, opt.width, opt.height};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.w << "\" height=\"" << f.h << "\" viewBox=\"0 0 "
     << f.w << ' ' << f.h << "\">\n";
  os << "  <style>\n"
        "    .edge { fill: none; stroke: #1f3b73; stroke-width: 2; }\n"
        "    .open-edge { fill: none; stroke: #b5452b; stroke-width: 1.5; stroke-dasharray: 6 4; }\n"
        "    .leaf { fill: none; stroke: #888; stroke-width: 1; stroke-dasharray: 3 3; }\n"
        "    .zero { fill: #000; }\n"
        "    .simple-pole { fill: #fff; stroke: #000; stroke-width: 1.5; }\n"
        "    .double-pole { fill: #fff; stroke: #a00; stroke-width: 1.5; }\n"
        "    text { font: 13px sans-serif; }\n"
        "  </style>\n";
  os << "  <rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  os << "  <clipPath id=\"frame\"><rect width=\"" << f.w << "\" height=\"" << f.h << "\"/></clipPath>\n";
  os << "  <g clip-path=\"url(#frame)\">\n";

  for (const auto& leaf : opt.extra_leaves) {
    for (const auto& piece : pieces(leaf.points, f)) polyline(os, piece, f, "leaf");
  }
  std::vector<std::pair<double, double>> inf_labels;
  for (const auto& e : g.edges) {
    const bool closed_up = e.trajectory.termination == Termination::HitSingular;
    const auto ps = pieces(e.polyline, f);
    for (const auto& piece : ps) polyline(os, piece, f, closed_up ? "edge" : "open-edge");
    const bool via_infinity =
        std::any_of(e.polyline.begin(), e.polyline.end(), [](const ChartPoint& p) { return p.chart == Chart::W; });
    if (!via_infinity) continue;
    // label where the edge leaves the frame
    for (const auto& piece : ps) {
      for (size_t i = 0; i + 1 < piece.size(); ++i) {
        const bool leaving = f.inside(piece[i]) && !f.inside(piece[i + 1]);
        const bool entering = !f.inside(piece[i]) && f.inside(piece[i + 1]);
        if (leaving || entering) {
          auto [x, y] = f.xy(piece[leaving ? i : i + 1]);
          inf_labels.emplace_back(std::clamp(x, 12.0, f.w - 40.0), std::clamp(y, 16.0, f.h - 8.0));
        }
      }
    }
  }
  for (const auto& [x, y] : inf_labels) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  <text x=\"%.1f\" y=\"%.1f\">to &#8734;</text>\n", x, y);
    os << buf;
  }

  bool pole_at_inf = false;
  for (const auto& e : div) {
    if (e.point.is_infinity()) {
      pole_at_inf = pole_at_inf || e.order == -2;
      continue;
    }
    auto [x, y] = f.xy(e.point.value());
    char buf[256];
    if (e.order > 0) {
      std::snprintf(buf, sizeof buf, "  <circle class=\"zero\" cx=\"%.2f\" cy=\"%.2f\" r=\"4\"/>\n", x, y);
    } else if (e.order == -1) {
      std::snprintf(buf, sizeof buf, "  <circle class=\"simple-pole\" cx=\"%.2f\" cy=\"%.2f\" r=\"4.5\"/>\n", x, y);
    } else {
      std::snprintf(buf, sizeof buf,
                    "  <g class=\"double-pole\"><circle cx=\"%.2f\" cy=\"%.2f\" r=\"6\"/>"
                    "<path d=\"M%.2f %.2f L%.2f %.2f M%.2f %.2f L%.2f %.2f\" stroke=\"#a00\"/></g>\n",
                    x, y, x - 4.2, y - 4.2, x + 4.2, y + 4.2, x - 4.2, y + 4.2, x + 4.2, y - 4.2);
    }
    os << buf;
  }
  os << "  </g>\n";

  int line = 0;
  auto caption = [&](const std::string& s) { os << "  <text x=\"10\" y=\"" << 20 + 16 * line++ << "\">" << s << "</text>\n"; };
  if (!opt.title.empty()) caption(escape(opt.title));
  caption(std::string("verdict: ") + to_string(g.verdict.kind));
  if (pole_at_inf) caption("double pole at &#8734;");
  os << "</svg>\n";
  return os.str();
}

}  // namespace strebel
