#include "ricci/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace ricci::plot {

namespace {

constexpr double kPanelWidth = 520;
constexpr double kPanelHeight = 380;
constexpr double kMarginLeft = 64;
constexpr double kMarginRight = 150;
constexpr double kMarginTop = 36;
constexpr double kMarginBottom = 48;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

void render_panel(std::string& svg, const Panel& p, double ox) {
  Range xr, yr;
  for (const auto& s : p.series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  xr.pad();
  yr.pad();
  const double w = kPanelWidth - kMarginLeft - kMarginRight;
  const double h = kPanelHeight - kMarginTop - kMarginBottom;
  const double x0 = ox + kMarginLeft;
  const double y0 = kMarginTop;
  const auto sx = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * w; };
  const auto sy = [&](double v) { return y0 + h - (v - yr.lo) / (yr.hi - yr.lo) * h; };

  svg += fmt::format(R"(<rect x="{:.1f}" y="{:.1f}" width="{:.1f}" height="{:.1f}" fill="none" stroke="#333"/>)"
                     "\n", x0, y0, w, h);
  svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle" font-size="14">{}</text>)"
                     "\n", x0 + w / 2, y0 - 12, escape(p.title));
  svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle" font-size="12">{}</text>)"
                     "\n", x0 + w / 2, y0 + h + 38, escape(p.x_label));
  svg += fmt::format(
      R"svg(<text x="{:.1f}" y="{:.1f}" text-anchor="middle" font-size="12" transform="rotate(-90 {:.1f} {:.1f})">{}</text>)svg"
      "\n", ox + 16, y0 + h / 2, ox + 16, y0 + h / 2, escape(p.y_label));
  for (int k = 0; k <= 5; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / 5.0;
    svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle" font-size="10">{:.3g}</text>)"
                       "\n", sx(xv), y0 + h + 16, xv);
    svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="end" font-size="10">{:.3g}</text>)"
                       "\n", x0 - 6, sy(yv) + 3, yv);
    svg += fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="#ddd"/>)"
                       "\n", x0, sy(yv), x0 + w, sy(yv));
  }
  double legend_y = y0 + 8;
  for (const auto& s : p.series) {
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      pts += fmt::format("{:.2f},{:.2f} ", sx(s.x[i]), sy(s.y[i]));
    svg += fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5"{} points="{}"/>)"
                       "\n", s.color, s.dashed ? R"( stroke-dasharray="6,4")" : "", pts);
    if (legend_y < y0 + h) {
      svg += fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="{}" stroke-width="2"{}/>)"
                         "\n", x0 + w + 10, legend_y, x0 + w + 30, legend_y, s.color,
                         s.dashed ? R"( stroke-dasharray="4,3")" : "");
      svg += fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-size="10">{}</text>)"
                         "\n", x0 + w + 34, legend_y + 3, escape(s.label));
      legend_y += 14;
    }
  }
}

}  // namespace

std::string render_svg(std::span<const Panel> panels) {
  const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  std::string svg = fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" viewBox="0 0 {:.0f} {:.0f}">)"
      "\n" R"(<rect width="100%" height="100%" fill="white"/>)" "\n",
      width, kPanelHeight, width, kPanelHeight);
  for (std::size_t i = 0; i < panels.size(); ++i)
    render_panel(svg, panels[i], kPanelWidth * static_cast<double>(i));
  svg += "</svg>\n";
  return svg;
}

std::vector<Panel> trajectory_panels(const Graph& g, const FlowTrajectory& traj,
                                     std::optional<double> asymptote) {
  Panel weights{"Edge weights", "t", "weight", {}};
  Panel curv{"Curvature", "t", "kappa", {}};
  std::vector<double> ts;
  for (const auto& s : traj.samples) ts.push_back(s.t);
  for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
    const std::string label = fmt::format("e{} ({}-{})", i, g.label(g.edge(i).u), g.label(g.edge(i).v));
    const std::string color = kPalette[i % std::size(kPalette)];
    Series ws{label, ts, {}, color, false};
    Series ks{label, ts, {}, color, false};
    for (const auto& s : traj.samples) {
      ws.y.push_back(std::exp(s.log_weights[i]));
      ks.y.push_back(s.kappa[i]);
    }
    weights.series.push_back(std::move(ws));
    curv.series.push_back(std::move(ks));
  }
  if (asymptote && !ts.empty()) {
    curv.series.push_back(
        {fmt::format("target {:.4g}", *asymptote), {ts.front(), ts.back()}, {*asymptote, *asymptote}, "#000000", true});
  }
  return {std::move(weights), std::move(curv)};
}

}  // namespace ricci::plot
