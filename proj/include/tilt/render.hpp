#pragma once

#include <string>

#include "tilt/workspace.hpp"

namespace tilt {

// One text line per grid row, top row first, using TWF glyphs. Particles are
// drawn with their label.
std::string render_ascii(const Workspace& w);

// Obstacles black, free cells white, particles as coloured discs (units) or
// capsules (dominoes), goals as dashed circles.
std::string render_svg(const Workspace& w, int cell_px = 24);

}  // namespace tilt
