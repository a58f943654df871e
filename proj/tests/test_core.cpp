#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>

#include "support.hpp"
#include "tilt/io.hpp"
#include "tilt/render.hpp"
#include "tilt/workspace.hpp"

using namespace tilt;
using testsupport::room;
using testsupport::unit;

namespace {

// The move examples quote interior coordinates; the ring adds one.
Cell in(int x, int y) { return {x + 1, y + 1}; }

std::string error_of(const std::string& text) {
  try {
    parse_workspace(text);
  } catch (const WorkspaceError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("smallest legal workspace parses") {
  Workspace w = parse_workspace("TWF v1 3 3\n###\n#.#\n###\n");
  CHECK(w.width() == 3);
  CHECK(w.height() == 3);
  CHECK(w.obstacle_count() == 8);
  CHECK(w.particles().empty());
}

TEST_CASE("uppercase pair becomes a horizontal domino") {
  Workspace w = parse_workspace("TWF v1 5 3\n#####\n#AA.#\n#####\n");
  REQUIRE(w.particles().size() == 1);
  CHECK(w.particles()[0].shape == Shape::HDomino);
  CHECK(w.particles()[0].anchor == Cell{1, 1});
}

TEST_CASE("vertical domino anchors on its lower cell") {
  Workspace w = parse_workspace("TWF v1 3 4\n###\n#B#\n#B#\n###\n");
  REQUIRE(w.particles().size() == 1);
  CHECK(w.particles()[0].shape == Shape::VDomino);
  CHECK(w.particles()[0].anchor == Cell{1, 1});
}

TEST_CASE("parse errors name their position") {
  CHECK(error_of("TWF v1 5 3\n#####\n#A.A#\n#####\n").find("domino halves not adjacent") != std::string::npos);
  CHECK(error_of("TWF v1 4 3\n####\n#..#\n###\n").find("line 4") != std::string::npos);
  CHECK(error_of("TWF v1 4 3\n####\n#...\n####\n").find("unbounded") != std::string::npos);
  CHECK(error_of("TWF v1 4 3\n####\n#a?#\n####\n").find("cell (2,1)") != std::string::npos);
  CHECK(error_of("TWF v1 4 3\n####\n#aa#\n####\n").find("more than once") != std::string::npos);
  CHECK(error_of("{\"width\":3,\"height\":3,\"obstacles\":[[0,0],[1,0],[2,0],[0,1],[2,1],[0,2],[1,2],[2,2]],"
                 "\"particles\":[{\"id\":\"a\",\"shape\":\"1x1\",\"anchor\":[1,1]},{\"id\":\"b\",\"shape\":\"1x1\",\"anchor\":[1,1]}]}")
            .find("overlapping bodies") != std::string::npos);
  CHECK(error_of("TWF v1 5 3\n#####\n#AAA#\n#####\n").find("exactly two cells") != std::string::npos);
}

TEST_CASE("serialize empty interior") {
  Workspace w(3, 3);
  CHECK(serialize_workspace(w, Format::Twf) == "TWF v1 3 3\n###\n#.#\n###\n");
}

TEST_CASE("json goals are ordered by row then column") {
  Workspace w = room(4, 4);
  w.add_particle(unit("a", {1, 1}));
  w.add_goal({{3, 2}, std::nullopt});
  w.add_goal({{1, 4}, "a"});
  w.add_goal({{2, 2}, std::nullopt});
  std::string js = serialize_workspace(w, Format::Json);
  auto p1 = js.find("[2,2]"), p2 = js.find("[3,2]"), p3 = js.find("[1,4]");
  REQUIRE(p1 != std::string::npos);
  CHECK(p1 < p2);
  CHECK(p2 < p3);
}

TEST_CASE("round trip through both formats on fuzzed workspaces") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    Workspace w = testsupport::random_workspace(rng);
    if (i % 3 == 0 && !w.particles().empty()) w.add_goal({w.particles()[0].anchor, w.particles()[0].id});
    if (i % 5 == 0) w.add_goal({{1, 1}, std::nullopt});
    Workspace a = parse_workspace(serialize_workspace(w, Format::Twf));
    Workspace b = parse_workspace(serialize_workspace(w, Format::Json));
    CHECK(a == w);
    CHECK(b == w);
    CHECK(serialize_workspace(a, Format::Twf) == serialize_workspace(w, Format::Twf));
  }
}

TEST_CASE("single particle slides to the wall") {
  Workspace w = room(5, 5);
  w.add_particle(unit("a", in(1, 1)));
  CHECK(apply_move(w, Move::Right).particles()[0].anchor == in(4, 1));
}

TEST_CASE("chain packs against the wall") {
  Workspace w = room(5, 5);
  w.add_particle(unit("a", in(1, 1)));
  w.add_particle(unit("b", in(2, 1)));
  Workspace r = apply_move(w, Move::Right);
  CHECK(r.find("a")->anchor == in(3, 1));
  CHECK(r.find("b")->anchor == in(4, 1));
}

TEST_CASE("obstacle stops a particle") {
  Workspace w = room(5, 5);
  w.set_obstacle(in(3, 1));
  w.add_particle(unit("a", in(0, 1)));
  Workspace r = apply_move(w, Move::Right);
  CHECK(r.particles()[0].anchor == in(2, 1));
  CHECK(r == testsupport::unit_step_oracle(w, Move::Right));
}

TEST_CASE("domino slides as a rigid body") {
  Workspace w = room(5, 5);
  w.set_obstacle(in(4, 2));
  w.add_particle({"A", 'A', Shape::HDomino, in(0, 2)});
  Workspace r = apply_move(w, Move::Right);
  CHECK(r.particles()[0].anchor == in(2, 2));
  CHECK(r == testsupport::unit_step_oracle(w, Move::Right));
}

TEST_CASE("empty sequence and repeated move") {
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    Workspace w = testsupport::random_workspace(rng);
    CHECK(apply_sequence(w, {}) == w);
    for (Move m : kAllMoves) CHECK(apply_sequence(w, {m, m}) == apply_move(w, m));
  }
}

TEST_CASE("moves are not inverses") {
  Workspace w = room(6, 3);
  w.add_particle(unit("a", in(2, 1)));
  Workspace r = apply_sequence(w, {Move::Right, Move::Left});
  CHECK(r.particles()[0].anchor == in(0, 1));
  CHECK(r.particles()[0].anchor != w.particles()[0].anchor);
}

TEST_CASE("sort-form engine equals the unit-step fixpoint") {
  std::mt19937 rng(2024);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    Workspace w = testsupport::random_workspace(rng, 10, 8, 2, 0.18);
    for (Move m : kAllMoves) {
      Workspace fast = apply_move(w, m);
      if (fast != testsupport::unit_step_oracle(w, m)) ++mismatches;
      // conservation of ids and shapes
      std::map<std::string, Shape> before, after;
      for (const auto& p : w.particles()) before[p.id] = p.shape;
      for (const auto& p : fast.particles()) after[p.id] = p.shape;
      CHECK(before == after);
      CHECK(apply_move(fast, m) == fast);
      CHECK(apply_move(w, m) == fast);
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("one clock cycle cannot reach the two shadow regions") {
  std::mt19937 rng(77);
  int tried = 0;
  for (int i = 0; i < 4000; ++i) {
    Workspace w = testsupport::random_workspace(rng, 10, 0, 0, 0.25);
    std::uniform_int_distribution<int> px(1, w.width() - 2), py(1, w.height() - 2);
    Cell s{px(rng), py(rng)};
    if (w.is_obstacle(s) || !w.is_obstacle({s.x + 1, s.y})) continue;
    w.add_particle(unit("a", s));
    ++tried;
    Cell e = apply_sequence(w, kClock).particles()[0].anchor;
    CHECK_FALSE((e.y == s.y && e.x > s.x));
    CHECK_FALSE((e.x == s.x - 1 && e.y <= s.y - 1));
  }
  CHECK(tried > 500);
}

TEST_CASE("canonical configuration keys") {
  Workspace w = load_workspace(testsupport::fixture("fig2-right.twf"));
  Workspace w2 = load_workspace(testsupport::fixture("fig2-right.twf"));
  CHECK(canonical_config(w).key() == canonical_config(w2).key());
  Workspace r1 = apply_move(w, Move::Right);
  CHECK(canonical_config(r1).key() == canonical_config(apply_move(r1, Move::Right)).key());

  Workspace a = room(4, 4), b = room(4, 4);
  a.add_particle(unit("x", {1, 1}));
  a.add_particle(unit("y", {2, 2}));
  b.add_particle(unit("y", {2, 2}));
  b.add_particle(unit("x", {1, 1}));
  CHECK(canonical_config(a).key() == canonical_config(b).key());
  CHECK(canonical_config(a) == canonical_config(b));
}

TEST_CASE("shipped right instance is solved by r,d,l") {
  Workspace w = load_workspace(testsupport::fixture("fig2-right.twf"));
  CHECK_FALSE(w.goals_satisfied());
  CHECK(apply_sequence(w, parse_moves("r,d,l")).goals_satisfied());
  CHECK(apply_sequence(w, parse_moves("r,d,\xE2\x84\x93")).goals_satisfied());
}

TEST_CASE("ascii render") {
  CHECK(render_ascii(Workspace(3, 3)) == "###\n#.#\n###\n");
  Workspace w = load_workspace(testsupport::fixture("fig2-left.twf"));
  std::string twf = serialize_workspace(w, Format::Twf);
  CHECK(twf.find(render_ascii(w)) != std::string::npos);
}

TEST_CASE("svg render draws one dashed goal") {
  Workspace w(3, 3);
  w.add_goal({{1, 1}, std::nullopt});
  std::string svg = render_svg(w);
  std::size_t count = 0;
  for (std::size_t p = svg.find("stroke-dasharray"); p != std::string::npos; p = svg.find("stroke-dasharray", p + 1)) ++count;
  CHECK(count == 1);
  CHECK(svg.find("<circle") != std::string::npos);
  Workspace f = load_workspace(testsupport::fixture("fig2-right.twf"));
  std::string s2 = render_svg(f);
  CHECK(std::count(s2.begin(), s2.end(), '\n') > 20);
}
