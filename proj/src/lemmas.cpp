#include "tilt/lemmas.hpp"

#include <algorithm>
#include <random>

#include "tilt/io.hpp"

namespace tilt {

namespace {

Workspace random_units(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(3, 9);
  int iw = dim(rng), ih = dim(rng);
  Workspace w(iw + 2, ih + 2);
  std::bernoulli_distribution obstacle(0.2);
  for (int y = 1; y <= ih; ++y)
    for (int x = 1; x <= iw; ++x)
      if (obstacle(rng)) w.set_obstacle({x, y});
  std::vector<Cell> free;
  for (int y = 1; y <= ih; ++y)
    for (int x = 1; x <= iw; ++x)
      if (!w.is_obstacle({x, y})) free.push_back({x, y});
  std::shuffle(free.begin(), free.end(), rng);
  int count = std::min<int>(static_cast<int>(free.size()), std::uniform_int_distribution<int>(2, 8)(rng));
  const std::string ids = "abcdefghijklmnopqrstuvwxyz";
  for (int i = 0; i < count; ++i) w.add_particle({std::string(1, ids[i]), ids[i], Shape::Unit, free[i]});
  return w;
}

MoveSequence random_moves(std::mt19937_64& rng) {
  int len = std::uniform_int_distribution<int>(1, 12)(rng);
  MoveSequence m;
  for (int i = 0; i < len; ++i) m.push_back(kAllMoves[std::uniform_int_distribution<int>(0, 3)(rng)]);
  return m;
}

std::vector<Cell> free_cells(const Workspace& w) {
  std::vector<Cell> out;
  for (int y = 1; y < w.height() - 1; ++y)
    for (int x = 1; x < w.width() - 1; ++x)
      if (!w.is_obstacle({x, y}) && !w.particle_at({x, y})) out.push_back({x, y});
  return out;
}

std::string describe(const Workspace& w, const MoveSequence& m) {
  return serialize_workspace(w, Format::Twf) + "moves " + format_moves(m) + "\n";
}

}  // namespace

bool occupied_after_insert(const Workspace& w, const MoveSequence& moves, std::size_t stage, Cell extra, Cell goal) {
  Workspace cur = w;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i == stage) cur.add_particle({"+", '+', Shape::Unit, extra});
    cur = apply_move(cur, moves[i]);
  }
  if (stage >= moves.size()) cur.add_particle({"+", '+', Shape::Unit, extra});
  return cur.particle_at(goal) != nullptr;
}

bool either_occupied_after_delete(const Workspace& w, const MoveSequence& moves, const std::string& removed, Cell g1,
                                  Cell g2) {
  Workspace cut = w;
  cut.clear_particles();
  for (const auto& p : w.particles())
    if (p.id != removed) cut.add_particle(p);
  Workspace end = apply_sequence(cut, moves);
  return end.particle_at(g1) || end.particle_at(g2);
}

FuzzReport fuzz_insert_lemma(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  FuzzReport rep;
  while (rep.trials < trials) {
    Workspace w = random_units(rng);
    MoveSequence m = random_moves(rng);
    std::size_t stage = std::uniform_int_distribution<std::size_t>(0, m.size())(rng);
    Workspace mid = apply_sequence(w, MoveSequence(m.begin(), m.begin() + stage));
    auto spots = free_cells(mid);
    if (spots.empty() || w.particles().empty()) continue;
    const Particle& p = w.particles()[std::uniform_int_distribution<std::size_t>(0, w.particles().size() - 1)(rng)];
    Cell goal = apply_sequence(w, m).find(p.id)->anchor;
    Cell extra = spots[std::uniform_int_distribution<std::size_t>(0, spots.size() - 1)(rng)];
    ++rep.trials;
    if (!occupied_after_insert(w, m, stage, extra, goal)) {
      if (rep.counterexamples++ == 0) rep.first_counterexample = describe(w, m);
    }
  }
  return rep;
}

FuzzReport fuzz_delete_lemma(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  FuzzReport rep;
  while (rep.trials < trials) {
    Workspace w = random_units(rng);
    if (w.particles().size() < 2) continue;
    MoveSequence m = random_moves(rng);
    auto ps = w.particles();
    std::shuffle(ps.begin(), ps.end(), rng);
    Workspace end = apply_sequence(w, m);
    Cell g1 = end.find(ps[0].id)->anchor, g2 = end.find(ps[1].id)->anchor;
    ++rep.trials;
    bool ok = either_occupied_after_delete(w, m, ps[0].id, g1, g2) &&
              either_occupied_after_delete(w, m, ps[1].id, g1, g2);
    if (!ok && rep.counterexamples++ == 0) rep.first_counterexample = describe(w, m);
  }
  return rep;
}

}  // namespace tilt
