#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "json.hpp"
#include "support.hpp"
#include "tilt/gates.hpp"
#include "tilt/io.hpp"
#include "tilt/lemmas.hpp"

using namespace tilt;

namespace {

std::map<std::string, int> named(const Gadget& g, const std::vector<int>& out) {
  std::map<std::string, int> m;
  auto outs = g.outputs();
  for (std::size_t i = 0; i < outs.size(); ++i) m[outs[i]->name] = out[i];
  for (std::size_t s = 0; s < g.state.size(); ++s) m[g.state[s].name] = out[outs.size() + s];
  return m;
}

int units(const Workspace& w) {
  int n = 0;
  for (const auto& p : w.particles()) n += p.shape == Shape::Unit;
  return n;
}

}  // namespace

TEST_CASE("NOT swaps the rails") {
  Gadget g = not_gate();
  auto hi = named(g, evaluate_gadget(g, {1, 0}));
  CHECK(hi["out.A"] == 0);
  CHECK(hi["out.~A"] == 1);
  auto lo = named(g, evaluate_gadget(g, {0, 1}));
  CHECK(lo["out.A"] == 1);
  CHECK(lo["out.~A"] == 0);
}

TEST_CASE("NOT twice is the identity on both rows") {
  Gadget g = not_gate();
  for (int a : {0, 1}) {
    auto once = evaluate_gadget(g, {a, 1 - a});
    auto twice = evaluate_gadget(g, once);
    CHECK(twice == std::vector<int>{a, 1 - a});
  }
}

TEST_CASE("universal gate rows follow the boolean operators") {
  Gadget g = universal_gate();
  auto r = named(g, evaluate_gadget(g, {1, 0, 0, 1}));
  CHECK(r["AND"] == 0);
  CHECK(r["NAND"] == 1);
  CHECK(r["OR"] == 1);
  CHECK(r["NOR"] == 0);
  auto both = named(g, evaluate_gadget(g, {1, 0, 1, 0}));
  CHECK(both["AND"] == 1);
  CHECK(both["NAND"] == 0);
  CHECK(both["OR"] == 1);
  CHECK(both["NOR"] == 0);
  auto none = named(g, evaluate_gadget(g, {0, 1, 0, 1}));
  CHECK(none["AND"] == 0);
  CHECK(none["NAND"] == 1);
  CHECK(none["OR"] == 0);
  CHECK(none["NOR"] == 1);
}

TEST_CASE("xor gate outputs xor, xnor and both constants") {
  Gadget g = xor_gate();
  auto r10 = named(g, evaluate_gadget(g, {1, 0, 0, 1}));
  CHECK(r10["XOR"] == 1);
  auto r11 = named(g, evaluate_gadget(g, {1, 0, 1, 0}));
  CHECK(r11["XOR"] == 0);
  CHECK(r11["XNOR"] == 1);
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      auto r = named(g, evaluate_gadget(g, {a, 1 - a, b, 1 - b}));
      CHECK(r["1"] == 1);
      CHECK(r["0"] == 0);
    }
}

TEST_CASE("fan-out copies the input") {
  Gadget g = fanout_gate(2);
  auto one = named(g, evaluate_gadget(g, {1, 0}));
  CHECK(one["A.1"] == 1);
  CHECK(one["A.2"] == 1);
  CHECK(one["~A.1"] == 0);
  CHECK(one["~A.2"] == 0);
  auto zero = named(g, evaluate_gadget(g, {0, 1}));
  CHECK(zero["A.1"] == 0);
  CHECK(zero["A.2"] == 0);
  CHECK(zero["~A.1"] == 1);
  CHECK(zero["~A.2"] == 1);

  Gadget g4 = fanout_gate(4);
  for (int a : {0, 1}) {
    auto r = named(g4, evaluate_gadget(g4, {a, 1 - a}));
    for (int k = 1; k <= 4; ++k) {
      CHECK(r["A." + std::to_string(k)] == a);
      CHECK(r["~A." + std::to_string(k)] == 1 - a);
    }
  }
  CHECK(g4.workspace.width() <= 23);
  CHECK(g4.workspace.height() <= 12);
}

TEST_CASE("fan-out area meets the bound exactly") {
  for (int n = 2; n <= 8; ++n) {
    Gadget g = fanout_gate(n);
    CHECK(g.workspace.width() == 4 * n + 7);
    CHECK(g.workspace.height() == 2 * n + 4);
    CHECK(check_gadget(g).ok());
  }
  CHECK_THROWS_AS(fanout_gate(1), GadgetError);
}

TEST_CASE("fan-out slider returns to its rest cell on both rows") {
  Gadget g = fanout_gate(3);
  Cell rest = g.workspace.find("S")->anchor;
  for (int a : {0, 1}) {
    Workspace after = apply_sequence(load_gadget(g, {a, 1 - a}), g.clock);
    CHECK(after.find("S")->anchor == rest);
  }
}

TEST_CASE("latch follows the table") {
  Gadget g = memory_latch();
  // (Set, Clear, Read, Q) -> (M, ~M, Q')
  auto r = named(g, evaluate_gadget(g, {1, 0, 0, 0}));
  CHECK(r["Q"] == 1);
  CHECK(r["M"] == 1);
  CHECK(r["~M"] == 0);
  r = named(g, evaluate_gadget(g, {0, 0, 1, 1}));
  CHECK(r["Q"] == 1);
  CHECK(r["M"] == 1);
  CHECK(r["~M"] == 0);
  r = named(g, evaluate_gadget(g, {0, 1, 0, 1}));
  CHECK(r["Q"] == 0);
  CHECK(r["M"] == 0);
  CHECK(r["~M"] == 1);
  r = named(g, evaluate_gadget(g, {0, 0, 1, 0}));
  CHECK(r["Q"] == 0);
  CHECK(r["~M"] == 1);
  CHECK(g.workspace.width() <= 16);
  CHECK(g.workspace.height() <= 8);
}

TEST_CASE("latch holds its state over a long operation sequence") {
  Gadget g = memory_latch();
  std::mt19937 rng(7);
  Workspace ws = load_gadget(g, {0, 0, 1, 0});
  ws.clear_particles();
  for (const auto& p : g.workspace.particles()) ws.add_particle(p);
  int q = 0;
  const char* ops[] = {"Set", "Clear", "Read"};
  for (int step = 0; step < 300; ++step) {
    int op = std::uniform_int_distribution<int>(0, 3)(rng);
    if (op < 3) ws.add_particle(testsupport::unit("x", g.port(ops[op]).cell));
    ws = apply_sequence(ws, g.clock);
    if (op == 0) q = 1;
    if (op == 1) q = 0;
    auto out = named(g, read_gadget(g, ws));
    REQUIRE(out["Q"] == q);
    if (op < 3) {
      REQUIRE(out["M"] == q);
      REQUIRE(out["~M"] == 1 - q);
    } else {
      REQUIRE(out["M"] + out["~M"] == 0);
    }
    // Drain the outputs the way the next stage would.
    Workspace next = ws;
    next.clear_particles();
    for (const auto& p : ws.particles())
      if (p.shape != Shape::Unit) next.add_particle(p);
    ws = next;
  }
}

TEST_CASE("illegal rail inputs are rejected") {
  CHECK_THROWS_WITH_AS(evaluate_gadget(not_gate(), {1, 1}), doctest::Contains("both rails set"), GadgetError);
  CHECK_THROWS_WITH_AS(evaluate_gadget(not_gate(), {0, 0}), doctest::Contains("both rails clear"), GadgetError);
  CHECK_THROWS_AS(evaluate_gadget(universal_gate(), {1, 0, 1, 1}), GadgetError);
  CHECK_THROWS_AS(evaluate_gadget(memory_latch(), {0, 0, 0, 1}), GadgetError);
  CHECK_THROWS_AS(evaluate_gadget(memory_latch(), {1, 1, 0, 1}), GadgetError);
  CHECK_THROWS_AS(evaluate_gadget(not_gate(), {1}), GadgetError);
  CHECK_THROWS_AS(catalog_gadget("nope"), GadgetError);
}

TEST_CASE("catalog passes exhaustive checks") {
  for (const auto& name : catalog_names()) {
    Gadget g = catalog_gadget(name);
    GadgetReport rep = check_gadget(g);
    INFO(name);
    for (const auto& f : rep.failures) INFO(f);
    CHECK(rep.ok());
    CHECK(rep.rows_ok == rep.rows_total);
    CHECK(g.clock == kClock);
    int expected_rows = name == "not" || name.rfind("fanout", 0) == 0 ? 2 : name == "latch" ? 6 : 4;
    CHECK(rep.rows_total == expected_rows);
  }
}

TEST_CASE("gadgets conserve particles on every row") {
  for (const auto& name : catalog_names()) {
    Gadget g = catalog_gadget(name);
    for (const auto& row : g.truth_table) {
      Workspace before = load_gadget(g, row.inputs);
      Workspace after = apply_sequence(before, g.clock);
      CHECK(units(after) == units(before));
      CHECK(after.particles().size() == before.particles().size());
    }
  }
}

TEST_CASE("waste cells are disjoint from ports") {
  for (const auto& name : catalog_names()) {
    Gadget g = catalog_gadget(name);
    for (Cell w : g.waste)
      for (const auto& p : g.ports) CHECK(w != p.cell);
  }
}

TEST_CASE("output columns drain and inputs come from above") {
  // Every output cell has a free column down to the bottom ring, and every
  // input cell sits on the top interior row.
  for (const auto& name : catalog_names()) {
    Gadget g = catalog_gadget(name);
    for (const Port* p : g.outputs())
      for (int y = p->cell.y; y >= 1; --y) CHECK_FALSE(g.workspace.is_obstacle({p->cell.x, y}));
    for (const Port* p : g.inputs()) CHECK(p->cell.y == g.workspace.height() - 2);
  }
}

TEST_CASE("latch idles in both states") {
  Gadget g = memory_latch();
  for (int q : {0, 1}) {
    Workspace ws = load_gadget(g, {0, 0, 1, q});
    ws.clear_particles();
    Particle s = *g.workspace.find("S");
    s.anchor = q ? g.state[0].one : g.state[0].zero;
    ws.add_particle(s);
    Workspace after = apply_sequence(ws, g.clock);
    CHECK(after.find("S")->anchor == s.anchor);
  }
}

TEST_CASE("fan-out needs a slider") {
  for (const auto& name : catalog_names()) {
    if (name.rfind("fanout", 0) != 0) continue;
    Gadget g = catalog_gadget(name);
    bool domino = false;
    for (const auto& p : g.workspace.particles()) domino = domino || p.shape != Shape::Unit;
    CHECK(domino);
  }
}

TEST_CASE("connectors deliver in one cycle") {
  for (int off : {1, -3, 2, 3, -2, 5, -6}) {
    Connector c = interconnect(off);
    Workspace ws = c.workspace;
    ws.add_particle(testsupport::unit("p", c.source));
    ws = apply_sequence(ws, kClock);
    INFO(off);
    CHECK(ws.particles()[0].anchor == c.destination);
    CHECK(c.destination.x - c.source.x == off);
    CHECK_FALSE(c.sink);
    // The next d hands the particle on.
    CHECK(apply_move(ws, Move::Down).particles()[0].anchor.y < c.destination.y);
  }
  Connector straight = interconnect(0);
  Workspace ws = straight.workspace;
  ws.add_particle(testsupport::unit("p", straight.source));
  ws = apply_sequence(ws, kClock);
  CHECK(ws.particles()[0].anchor == straight.destination);
  CHECK(straight.destination.x == straight.source.x);
  CHECK(straight.sink);
  CHECK(apply_sequence(ws, kClock) == ws);
  CHECK_THROWS_WITH_AS(interconnect(-1), doctest::Contains("unroutable"), GadgetError);
}

TEST_CASE("a connector carries a NOT output into a second NOT") {
  Gadget n = not_gate();
  for (int off : {1, -3}) {
    Stack s = interconnect(n, "out.~A", n, "A", off);
    for (int a : {0, 1}) {
      Workspace ws = s.workspace;
      Cell src = n.port(a ? "A" : "~A").cell;
      ws.add_particle(testsupport::unit("x", {src.x + s.from_offset.x, src.y + s.from_offset.y}));
      for (int c = 0; c < 3; ++c) ws = apply_sequence(ws, kClock);
      Cell out = n.port("out.~A").cell;
      Cell at = {out.x + s.to_offset.x, out.y + s.to_offset.y};
      INFO(off << " a=" << a);
      CHECK((ws.particle_at(at) != nullptr) == (a == 1));
    }
  }
  CHECK_THROWS_AS(interconnect(n, "out.~A", n, "A", -1), GadgetError);
}

TEST_CASE("adding a particle never empties a reached goal") {
  FuzzReport r = fuzz_insert_lemma(11, 500);
  CHECK(r.trials == 500);
  CHECK_MESSAGE(r.counterexamples == 0, r.first_counterexample);
}

TEST_CASE("deleting one of two particles leaves a goal occupied") {
  FuzzReport r = fuzz_delete_lemma(12, 500);
  CHECK(r.trials == 500);
  CHECK_MESSAGE(r.counterexamples == 0, r.first_counterexample);
}

TEST_CASE("shipped gate fixtures match the catalog") {
  for (const auto& name : catalog_names()) {
    Gadget g = catalog_gadget(name);
    INFO(name);
    std::string twf = read_file(testsupport::fixture("gates/" + name + ".twf"));
    CHECK(parse_workspace(twf) == g.workspace);
    CHECK(twf == serialize_workspace(g.workspace, Format::Twf));
    auto side = nlohmann::json::parse(read_file(testsupport::fixture("gates/" + name + ".json")));
    CHECK(side["name"] == name);
    CHECK(side["clock"] == "d,l,u,r");
    REQUIRE(side["ports"].size() == g.ports.size());
    for (std::size_t i = 0; i < g.ports.size(); ++i) {
      CHECK(side["ports"][i]["name"] == g.ports[i].name);
      CHECK(side["ports"][i]["x"] == g.ports[i].cell.x);
      CHECK(side["ports"][i]["y"] == g.ports[i].cell.y);
    }
    REQUIRE(side["truth_table"].size() == g.truth_table.size());
    for (std::size_t i = 0; i < g.truth_table.size(); ++i) {
      CHECK(side["truth_table"][i]["inputs"].get<std::vector<int>>() == g.truth_table[i].inputs);
      CHECK(side["truth_table"][i]["outputs"].get<std::vector<int>>() == g.truth_table[i].outputs);
    }
  }
}
