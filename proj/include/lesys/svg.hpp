#pragma once

#include "lesys/green.hpp"
#include "lesys/landscape.hpp"

#include <string>

namespace lesys {

// Self-contained SVG: colour ramp, axis labels, legend, and the (x1, x2) section of the domain boundary.
// NaN cells are drawn grey. Throws "empty-grid".
std::string heatmap_svg(const SliceGrid& g, const std::string& title, const Domain* outline = nullptr,
                        const std::string& comment = "");

}  // namespace lesys
