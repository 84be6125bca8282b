#pragma once

#include <string>

#include "transit/scenarios.hpp"

namespace transit {

// One 256px panel per row, each a 512x512 viewBox over the unit Klein disk.
// Panel contents: axes, the disk boundary, and the rescaled images of a small
// hexagon under all reduced words of length <= 2. The collapsing coordinate
// is drawn vertically. An empty report still gets one panel of axes.
std::string render_svg(const TransitionReport& report);

} // namespace transit
