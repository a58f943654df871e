#pragma once

// Negative-space builder: mark free cells at arbitrary coordinates; every other
// cell inside the bounding box becomes an obstacle.

#include <algorithm>
#include <climits>
#include <set>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt::detail {

class Carver {
 public:
  void open(int x, int y) { free_.insert({y, x}); }
  void open(Cell c) { open(c.x, c.y); }
  void row(int y, int x0, int x1) {
    for (int x = x0; x <= x1; ++x) open(x, y);
  }
  void col(int x, int y0, int y1) {
    for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y) open(x, y);
  }
  bool is_open(Cell c) const { return free_.count({c.y, c.x}) > 0; }
  void put(Particle p) { particles_.push_back(std::move(p)); }

  std::pair<Cell, Cell> bounds() const {
    Cell lo{INT_MAX, INT_MAX}, hi{INT_MIN, INT_MIN};
    for (auto [y, x] : free_) {
      lo = {std::min(lo.x, x), std::min(lo.y, y)};
      hi = {std::max(hi.x, x), std::max(hi.y, y)};
    }
    if (lo.x == INT_MAX) return {{0, 0}, {0, 0}};
    return {lo, hi};
  }

  // The workspace interior is exactly the bounding box of the open cells.
  Workspace finish(Cell& shift) const {
    auto [lo, hi] = bounds();
    shift = {1 - lo.x, 1 - lo.y};
    Workspace w(hi.x - lo.x + 3, hi.y - lo.y + 3);
    for (int y = lo.y; y <= hi.y; ++y)
      for (int x = lo.x; x <= hi.x; ++x)
        if (!is_open({x, y})) w.set_obstacle({x + shift.x, y + shift.y});
    for (Particle p : particles_) {
      p.anchor = {p.anchor.x + shift.x, p.anchor.y + shift.y};
      w.add_particle(std::move(p));
    }
    return w;
  }

 private:
  std::set<std::pair<int, int>> free_;
  std::vector<Particle> particles_;
};

inline Cell translate(Cell c, Cell by) { return {c.x + by.x, c.y + by.y}; }

}  // namespace tilt::detail
