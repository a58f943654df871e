#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "support.hpp"
#include "tilt/solver.hpp"

using namespace tilt;

namespace {

// Depth-limited search without deduplication; the independent oracle for
// optimal depth.
bool dls(const Workspace& w, const GoalSpec& g, int depth) {
  if (goal_met(w, g)) return true;
  if (depth == 0) return false;
  for (Move m : kAllMoves)
    if (dls(apply_move(w, m), g, depth - 1)) return true;
  return false;
}

int iddfs(const Workspace& w, const GoalSpec& g, int max_depth) {
  for (int d = 0; d <= max_depth; ++d)
    if (dls(w, g, d)) return d;
  return -1;
}

}  // namespace

TEST_CASE("start already at goal") {
  Workspace w = testsupport::room(3, 3);
  w.add_particle(testsupport::unit("a", {1, 1}));
  w.add_goal({{1, 1}, "a"});
  auto r = bfs_shortest_sequence(w, GoalSpec::from_workspace(w));
  CHECK(r.status == SearchStatus::Solved);
  CHECK(r.sequence.empty());
}

TEST_CASE("right instance solved at depth three") {
  Workspace w = load_workspace(testsupport::fixture("fig2-right.twf"));
  auto r = bfs_shortest_sequence(w, GoalSpec::from_workspace(w));
  REQUIRE(r.status == SearchStatus::Solved);
  CHECK(r.sequence.size() == 3);
  CHECK(apply_sequence(w, r.sequence).goals_satisfied());
  CHECK(apply_sequence(w, parse_moves("r,d,l")).goals_satisfied());
  CHECK(iddfs(w, GoalSpec::from_workspace(w), 3) == 3);
  CHECK(is_solvable(w, GoalSpec::from_workspace(w)));
}

TEST_CASE("left instance is unsolvable") {
  Workspace w = load_workspace(testsupport::fixture("fig2-left.twf"));
  auto r = bfs_shortest_sequence(w, GoalSpec::from_workspace(w));
  CHECK(r.status == SearchStatus::Unsolvable);
  auto all = reachable_configs(w, 1'000'000);
  CHECK_FALSE(all.capped);
  CHECK(all.configs.size() == r.explored);
  for (const auto& c : all.configs) {
    Workspace probe = w;
    for (std::size_t i = 0; i < c.entries.size(); ++i) probe.set_anchor(i, c.entries[i].anchor);
    CHECK_FALSE(probe.goals_satisfied());
  }
  CHECK_FALSE(is_solvable(w, GoalSpec::from_workspace(w)));
}

TEST_CASE("single particle in an empty room") {
  // From a corner only the four corners are reachable.
  Workspace w = testsupport::room(3, 3);
  w.add_particle(testsupport::unit("a", {1, 1}));
  auto all = reachable_configs(w, 100);
  CHECK(all.configs.size() == 4);
  std::set<std::pair<int, int>> cells;
  for (const auto& c : all.configs) cells.insert({c.entries[0].anchor.x, c.entries[0].anchor.y});
  CHECK(cells == std::set<std::pair<int, int>>{{1, 1}, {3, 1}, {1, 3}, {3, 3}});

  // From the centre the first move lands on a wall midpoint, the second in a corner.
  Workspace c = testsupport::room(3, 3);
  c.add_particle(testsupport::unit("a", {2, 2}));
  CHECK(reachable_configs(c, 100).configs.size() == 9);
}

TEST_CASE("no particles") {
  auto all = reachable_configs(Workspace(4, 4), 10);
  CHECK(all.configs.size() == 1);
  CHECK(all.configs[0].entries.empty());
}

TEST_CASE("reachable set is closed under every move") {
  std::mt19937 rng(5);
  for (int i = 0; i < 40; ++i) {
    Workspace w = testsupport::random_workspace(rng, 6, 3, 1);
    auto all = reachable_configs(w, 200000);
    REQUIRE_FALSE(all.capped);
    std::set<std::string> keys;
    for (const auto& c : all.configs) keys.insert(c.key());
    for (const auto& c : all.configs) {
      Workspace probe = w;
      for (std::size_t k = 0; k < c.entries.size(); ++k) probe.set_anchor(k, c.entries[k].anchor);
      for (Move m : kAllMoves) CHECK(keys.count(canonical_config(apply_move(probe, m)).key()) == 1);
    }
  }
}

TEST_CASE("budget exhaustion is never reported as unsolvable") {
  Workspace w = load_workspace(testsupport::fixture("fig2-left.twf"));
  auto r = bfs_shortest_sequence(w, GoalSpec::from_workspace(w), 3);
  CHECK(r.status == SearchStatus::BudgetExhausted);
  CHECK_THROWS(is_solvable(w, GoalSpec::from_workspace(w), 3));
}

TEST_CASE("optimal depth matches iterative deepening on fuzzed instances") {
  std::mt19937 rng(99);
  int solved = 0;
  int attempts = 0;
  while (solved < 200 && attempts < 20000) {
    ++attempts;
    Workspace w = testsupport::random_workspace(rng, 8, 3, 1, 0.2);
    if (w.particles().empty()) continue;
    // Goal: the first particle's position after a short random walk.
    std::uniform_int_distribution<int> len(1, 5), mv(0, 3);
    Workspace walk = w;
    int steps = len(rng);
    for (int s = 0; s < steps; ++s) walk = apply_move(walk, kAllMoves[mv(rng)]);
    const Particle& p = walk.particles()[0];
    w.add_goal({p.anchor, p.id});
    GoalSpec g = GoalSpec::from_workspace(w);
    auto r = bfs_shortest_sequence(w, g);
    REQUIRE(r.status == SearchStatus::Solved);
    CHECK(static_cast<int>(r.sequence.size()) == iddfs(w, g, steps));
    CHECK(apply_sequence(w, r.sequence).goals_satisfied());
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("unsolvable verdicts survive a long random walk") {
  Workspace w = load_workspace(testsupport::fixture("fig2-left.twf"));
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> mv(0, 3);
  Slider s(w);
  auto a = s.anchors_of(w);
  GoalSpec g = GoalSpec::from_workspace(w);
  bool hit = false;
  Workspace probe = w;
  for (int i = 0; i < 100000 && !hit; ++i) {
    s.apply(a, kAllMoves[mv(rng)]);
    for (std::size_t k = 0; k < a.size(); ++k) probe.set_anchor(k, a[k]);
    hit = probe.goals_satisfied();
  }
  CHECK_FALSE(hit);
}

TEST_CASE("exact configuration goal") {
  Workspace w = load_workspace(testsupport::fixture("fig2-right.twf"));
  Workspace target = apply_sequence(w, parse_moves("l,u,r"));
  auto r = bfs_shortest_sequence(w, GoalSpec::exact(canonical_config(target)));
  REQUIRE(r.status == SearchStatus::Solved);
  CHECK(canonical_config(apply_sequence(w, r.sequence)) == canonical_config(target));
  CHECK(r.sequence.size() <= 3);
}
