#pragma once

#include <string>
#include <vector>

#include "strebel/strebel.hpp"

namespace strebel {

struct SvgOptions {
  int width = 800;
  int height = 800;
  std::vector<Trajectory> extra_leaves;  ///< drawn dashed
  std::string title;
};

/// Critical graph picture in the z-plane. Zeros are filled dots, double poles
/// crossed dots, simple poles open dots. Edges that close up at vertices are
/// solid; edges cut off by the budget or a numerical failure are dashed.
std::string render_svg(const QuadDiff& w, const CriticalGraph& g, const SvgOptions& opt = {});

}  // namespace strebel
