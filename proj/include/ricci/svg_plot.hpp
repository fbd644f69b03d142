#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricci/flow.hpp"

namespace ricci::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Panels are laid out side by side, each with axes, ticks and a legend.
std::string render_svg(std::span<const Panel> panels);

// Weight curves and curvature curves of a trajectory; a dashed horizontal
// line marks `asymptote` when given.
std::vector<Panel> trajectory_panels(const Graph& g, const FlowTrajectory& traj,
                                     std::optional<double> asymptote);

}  // namespace ricci::plot
