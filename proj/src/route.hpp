#pragma once

// One-cycle routing block. Each wire falls in its source column, slides left
// to a short rise, climbs one row and slides right to its target column:
//
//   d: fall in column s onto a floor at (s, f-1)
//   l: slide to lstop = min(s, t) - 1 against a wall at (lstop-1, f)
//   u: rise one row to g = f+1 under a ceiling at (lstop, g+1)
//   r: slide to t against a wall at (t+1, g)
//
// A through wire leaves column t open below g, so the next d carries the
// particle out of the block. A sink wire keeps it: the cell under t is closed
// and the particle shuttles between t and lstop on row g forever after.
// Shifts t-s of 0 and -1 cannot be built this way; sinks need t > s.

#include <optional>
#include <vector>

#include "carve.hpp"

namespace tilt::detail {

struct Wire {
  int from = 0;
  int to = 0;
  bool sink = false;
};

bool shift_routable(const Wire& w);

// rank[k] is the vertical slot of wire k (0 at the top). Slot r uses rows
// g = top - 3r and f = g - 1, so a block of W wires is 3W - 1 rows tall.
struct RoutePlan {
  std::vector<int> rank;
  int height = 0;
};

inline int route_height(std::size_t wires) { return wires == 0 ? 0 : 3 * static_cast<int>(wires) - 1; }

// Orders the wires so that no column passing through a wire's rows hits one
// of its walls. Returns nothing when the shifts or the column pattern make
// that impossible.
std::optional<RoutePlan> plan_route(const std::vector<Wire>& wires);

// Opens the cells of the block. `top` is the block's top row; source columns
// are also opened on the row above it. Through columns are opened down to
// `exit_row` inclusive.
void carve_route(Carver& cv, const std::vector<Wire>& wires, const RoutePlan& plan, int top, int exit_row);

// Where wire k rests after its cycle.
Cell route_end(const std::vector<Wire>& wires, const RoutePlan& plan, std::size_t k, int top);

// Leftmost and rightmost columns the block touches, walls included.
std::pair<int, int> route_span(const std::vector<Wire>& wires);

}  // namespace tilt::detail
