#pragma once

#include <string>

#include "planforge/model.hpp"

namespace planforge {

// SVG 1.1 floor plan: the boundary outline, one labelled rect per space, one tick per opening.
// The viewBox is the boundary bounding box grown by 1 m, with plan north up.
std::string to_svg(const FloorPlan& plan, const Boundary& boundary);

}  // namespace planforge
