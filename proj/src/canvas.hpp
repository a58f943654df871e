#pragma once

// Builder scratchpad: collect obstacles and particles at arbitrary integer
// coordinates, then fit a bounded workspace around them.

#include <algorithm>
#include <climits>
#include <set>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt::detail {

class Canvas {
 public:
  void block(Cell c) { obstacles_.insert({c.y, c.x}); }
  void block(int x, int y) { block(Cell{x, y}); }
  void unblock(Cell c) { obstacles_.erase({c.y, c.x}); }
  bool blocked(Cell c) const { return obstacles_.count({c.y, c.x}) > 0; }
  void put(Particle p) { particles_.push_back(std::move(p)); }
  void include(Cell c) { extra_.push_back(c); }
  std::size_t obstacle_count() const { return obstacles_.size(); }

  // Smallest (min, max) box over everything placed.
  std::pair<Cell, Cell> bounds() const {
    Cell lo{INT_MAX, INT_MAX}, hi{INT_MIN, INT_MIN};
    auto grow = [&](Cell c) {
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
    };
    for (auto [y, x] : obstacles_) grow({x, y});
    for (const auto& p : particles_)
      for (int k = 0; k < p.size(); ++k) grow(p.cell(k));
    for (Cell c : extra_) grow(c);
    if (lo.x == INT_MAX) return {{0, 0}, {0, 0}};
    return {lo, hi};
  }

  // Fits the workspace with `margin` free cells between the content and the
  // boundary ring. `shift` receives the local-to-workspace translation.
  Workspace finish(Cell& shift, int margin = 1) const {
    auto [lo, hi] = bounds();
    shift = {1 + margin - lo.x, 1 + margin - lo.y};
    Workspace w(hi.x - lo.x + 3 + 2 * margin, hi.y - lo.y + 3 + 2 * margin);
    for (auto [y, x] : obstacles_) w.set_obstacle({x + shift.x, y + shift.y});
    for (Particle p : particles_) {
      p.anchor = {p.anchor.x + shift.x, p.anchor.y + shift.y};
      w.add_particle(std::move(p));
    }
    return w;
  }

 private:
  std::set<std::pair<int, int>> obstacles_;
  std::vector<Particle> particles_;
  std::vector<Cell> extra_;
};

}  // namespace tilt::detail
