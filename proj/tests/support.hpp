#pragma once

#include <random>
#include <string>
#include <vector>

#include "tilt/io.hpp"
#include "tilt/workspace.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(TILT_FIXTURES) + "/" + name; }

// Empty bounded room; interior cells are (1..iw, 1..ih).
inline tilt::Workspace room(int iw, int ih) { return tilt::Workspace(iw + 2, ih + 2); }

inline tilt::Particle unit(const std::string& id, tilt::Cell at) { return {id, id[0], tilt::Shape::Unit, at}; }

// Reference semantics: advance every particle whose leading cells are free by
// one step, all at once, until nothing moves.
inline tilt::Workspace unit_step_oracle(const tilt::Workspace& w, tilt::Move m) {
  tilt::Workspace cur = w;
  for (;;) {
    const auto& ps = cur.particles();
    std::vector<std::vector<int>> owner(cur.width(), std::vector<int>(cur.height(), -1));
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (int k = 0; k < ps[i].size(); ++k) owner[ps[i].cell(k).x][ps[i].cell(k).y] = static_cast<int>(i);
    std::vector<std::size_t> movers;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      bool free = true;
      for (int k = 0; k < ps[i].size(); ++k) {
        tilt::Cell n = tilt::step(ps[i].cell(k), m);
        if (cur.is_obstacle(n)) free = false;
        else if (owner[n.x][n.y] >= 0 && owner[n.x][n.y] != static_cast<int>(i)) free = false;
      }
      if (free) movers.push_back(i);
    }
    if (movers.empty()) return cur;
    for (std::size_t i : movers) cur.set_anchor(i, tilt::step(ps[i].anchor, m));
  }
}

// Random bounded workspace: interior up to max_inner square, up to
// max_particles bodies of which at most max_dominoes are dominoes.
inline tilt::Workspace random_workspace(std::mt19937& rng, int max_inner = 10, int max_particles = 8,
                                        int max_dominoes = 2, double density = 0.2) {
  std::uniform_int_distribution<int> dim(2, max_inner);
  int iw = dim(rng), ih = dim(rng);
  tilt::Workspace w(iw + 2, ih + 2);
  std::bernoulli_distribution obstacle(density);
  for (int y = 1; y <= ih; ++y)
    for (int x = 1; x <= iw; ++x)
      if (obstacle(rng)) w.set_obstacle({x, y});
  std::vector<std::vector<bool>> used(iw + 2, std::vector<bool>(ih + 2, false));
  auto free_cell = [&](tilt::Cell c) { return !w.is_obstacle(c) && !used[c.x][c.y]; };
  std::uniform_int_distribution<int> px(1, iw), py(1, ih);
  int count = std::uniform_int_distribution<int>(0, max_particles)(rng);
  int dominoes = 0;
  const std::string units = "abcdefghijklmnopqrstuvwxyz0123456789";
  int next_unit = 0, next_dom = 0;
  for (int i = 0; i < count * 4 && next_unit + next_dom < count; ++i) {
    tilt::Cell c{px(rng), py(rng)};
    if (!free_cell(c)) continue;
    bool dom = dominoes < max_dominoes && std::bernoulli_distribution(0.3)(rng);
    if (dom) {
      bool horiz = std::bernoulli_distribution(0.5)(rng);
      tilt::Cell d = horiz ? tilt::Cell{c.x + 1, c.y} : tilt::Cell{c.x, c.y + 1};
      if (!free_cell(d)) continue;
      std::string id(1, static_cast<char>('A' + next_dom++));
      w.add_particle({id, id[0], horiz ? tilt::Shape::HDomino : tilt::Shape::VDomino, c});
      used[c.x][c.y] = used[d.x][d.y] = true;
      ++dominoes;
    } else {
      std::string id(1, units[next_unit++]);
      w.add_particle(unit(id, c));
      used[c.x][c.y] = true;
    }
  }
  return w;
}

}  // namespace testsupport
