#include "tilt/gates.hpp"

#include <algorithm>
#include <set>

#include "carve.hpp"
#include "json.hpp"
#include "route.hpp"

namespace tilt {

namespace {

using D = Port::Direction;

// Interior art, top row first; '#' is obstacle. The ring is added around it.
Workspace from_art(const std::vector<std::string>& rows) {
  int h = static_cast<int>(rows.size());
  int w = static_cast<int>(rows[0].size());
  Workspace ws(w + 2, h + 2);
  for (int r = 0; r < h; ++r)
    for (int x = 0; x < w; ++x)
      if (rows[r][x] == '#') ws.set_obstacle({x + 1, h - r});
  return ws;
}

Cell in(Cell interior) { return {interior.x + 1, interior.y + 1}; }

void add_port(Gadget& g, const std::string& name, Cell interior, D dir, bool preset = false) {
  g.ports.push_back({name, in(interior), dir, preset});
}

Particle unit(const std::string& id, Cell c) {
  Particle p;
  p.id = id;
  p.label = id.size() == 1 ? id[0] : 'o';
  p.shape = Shape::Unit;
  p.anchor = c;
  return p;
}

Particle slider(const std::string& id, Cell anchor) {
  Particle p;
  p.id = id;
  p.label = id[0];
  p.shape = Shape::HDomino;
  p.anchor = anchor;
  return p;
}

std::vector<const Port*> free_inputs(const Gadget& g) {
  std::vector<const Port*> out;
  for (const auto& p : g.ports)
    if (p.direction == D::Input && !p.preset) out.push_back(&p);
  return out;
}

// All legal input rows: one choice per rail group, then every state.
std::vector<std::vector<int>> legal_rows(const Gadget& g) {
  auto ins = free_inputs(g);
  std::vector<std::vector<int>> rows = {std::vector<int>(ins.size(), 0)};
  for (const auto& group : g.rails) {
    std::vector<std::vector<int>> next;
    for (const auto& r : rows)
      for (const auto& name : group) {
        auto v = r;
        for (std::size_t i = 0; i < ins.size(); ++i)
          if (ins[i]->name == name) v[i] = 1;
        next.push_back(v);
      }
    rows = std::move(next);
  }
  for (std::size_t s = 0; s < g.state.size(); ++s) {
    std::vector<std::vector<int>> next;
    for (int q : {0, 1})
      for (auto r : rows) {
        r.push_back(q);
        next.push_back(r);
      }
    rows = std::move(next);
  }
  return rows;
}

Cell settle_alone(const Workspace& ws, const Particle& p) {
  Workspace probe = ws;
  probe.clear_particles();
  probe.add_particle(p);
  return apply_move(probe, Move::Down).particles()[0].anchor;
}

std::string bits(const std::vector<int>& v) {
  std::string s;
  for (int b : v) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace

// --- catalog -------------------------------------------------------------

Gadget not_gate() {
  Gadget g;
  g.name = "not";
  g.clock = kClock;
  // A falls to row 3, slides to the wall, climbs to row 4 and runs right to
  // column 4. ~A falls to row 1, climbs at column 2 and runs to column 5.
  g.workspace = from_art({
      "#.#.##",
      ".....#",
      "..#..#",
      "##....",
      "##....",
      "####..",
  });
  add_port(g, "A", {1, 5}, D::Input);
  add_port(g, "~A", {3, 5}, D::Input);
  add_port(g, "out.A", {5, 2}, D::Output);
  add_port(g, "out.~A", {4, 4}, D::Output);
  g.rails = {{"A", "~A"}};
  for (int a : {1, 0}) g.truth_table.push_back({{a, 1 - a}, {1 - a, a}});
  return g;
}

Gadget universal_gate() {
  Gadget g;
  g.name = "universal";
  g.clock = kClock;
  // Two sorters side by side. Each drops its pair onto the floor, stacks it
  // against the left wall and lifts the second particle one row, so r puts
  // "at least one" on the floor cell and "both" on the cell above it.
  g.workspace = from_art({
      "##..#####..##",
      "#....###....#",
      "......#......",
  });
  add_port(g, "A", {2, 2}, D::Input);
  add_port(g, "~A", {9, 2}, D::Input);
  add_port(g, "B", {3, 2}, D::Input);
  add_port(g, "~B", {10, 2}, D::Input);
  add_port(g, "AND", {4, 1}, D::Output);
  add_port(g, "NAND", {12, 0}, D::Output);
  add_port(g, "OR", {5, 0}, D::Output);
  add_port(g, "NOR", {11, 1}, D::Output);
  g.rails = {{"A", "~A"}, {"B", "~B"}};
  for (int a : {1, 0})
    for (int b : {1, 0}) {
      int andv = a & b, orv = a | b;
      g.truth_table.push_back({{a, 1 - a, b, 1 - b}, {andv, 1 - andv, orv, 1 - orv}});
    }
  return g;
}

Gadget xor_gate() {
  Gadget g;
  g.name = "xor";
  g.clock = kClock;
  // {A, ~B} meet on row 1 and {~A, B} on row 0. Whichever pair is loaded
  // stacks against its wall; the lower particle ends at column 10 (the
  // constant 1) and the other at column 9 (XNOR) or, lifted to row 3,
  // column 12 (XOR). Column 11 is never reached and reads constant 0.
  g.workspace = from_art({
      "##..###..####",
      "#............",
      "#...##...###.",
      "...........#.",
      "#####........",
  });
  add_port(g, "A", {2, 4}, D::Input);
  add_port(g, "~A", {7, 4}, D::Input);
  add_port(g, "B", {8, 4}, D::Input);
  add_port(g, "~B", {3, 4}, D::Input);
  add_port(g, "XOR", {12, 3}, D::Output);
  add_port(g, "XNOR", {9, 1}, D::Output);
  add_port(g, "1", {10, 1}, D::Output);
  add_port(g, "0", {11, 0}, D::Output);
  g.rails = {{"A", "~A"}, {"B", "~B"}};
  for (int a : {1, 0})
    for (int b : {1, 0}) {
      int x = a ^ b;
      g.truth_table.push_back({{a, 1 - a, b, 1 - b}, {x, 1 - x, 1, 0}});
    }
  return g;
}

Gadget fanout_gate(int n) {
  if (n < 2) throw GadgetError("fan-out needs at least 2 outputs, got " + std::to_string(n));
  const int wd = 4 * n + 5, hd = 2 * n + 2, top = 2 * n + 1, slot = n;
  std::set<Cell> open;
  auto col = [&](int x, int y0, int y1) {
    for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y) open.insert({x, y});
  };
  auto row = [&](int y, int x0, int x1) {
    for (int x = std::min(x0, x1); x <= std::max(x0, x1); ++x) open.insert({x, y});
  };
  std::vector<int> supply;
  for (int i = 0; i < n - 1; ++i) supply.push_back(7 + 2 * i);
  const int abar = n == 2 ? 10 : 2 * n + 7;
  const int v = abar + n - 1;

  // The slider rests at [4,5] on the slot row. A lands on it, l drags both to
  // the wall and A rises at column 0; the slider now covers the supply lift
  // at column 2, so supplies stop under it on the A rows. Without A the
  // slider stops at [0,1] and supplies climb past the slot to the ~A rows.
  row(slot, 0, 5);
  col(3, top, slot);
  col(0, slot + 1, 0);
  col(2, 0, 2 * n - 1);
  for (int i = 0; i < n - 1; ++i) {
    col(supply[i], top, i);
    row(i, 2, supply[i]);
  }
  std::vector<Cell> outs_a = {{0, n + 1}, {2, n - 1}};
  for (int j = n - 2; j >= 1; --j) {
    int o = j + 1 <= n - 2 ? supply[j + 1] - 1 : supply[n - 2] + 1;
    row(j, 2, o);
    col(o, j, 0);
    outs_a.push_back({o, j});
  }
  std::vector<Cell> outs_n = {{v, 2 * n}};
  col(abar, top, 2 * n);
  row(2 * n, abar - 1, v);
  col(v, 2 * n, 0);
  for (int r = n + 1; r <= 2 * n - 1; ++r) {
    int w = abar - 1 + (2 * n - 1 - r);
    row(r, 2, w);
    col(w, r, 0);
    outs_n.push_back({w, r});
  }

  Gadget g;
  g.name = "fanout" + std::to_string(n);
  g.clock = kClock;
  g.workspace = Workspace(wd + 2, hd + 2);
  for (int y = 0; y < hd; ++y)
    for (int x = 0; x < wd; ++x)
      if (!open.count({x, y})) g.workspace.set_obstacle(in({x, y}));
  g.workspace.add_particle(slider("S", in({4, slot})));
  add_port(g, "A", {3, top}, D::Input);
  add_port(g, "~A", {abar, top}, D::Input);
  for (int i = 0; i < n - 1; ++i) {
    std::string id(1, static_cast<char>('a' + i));
    add_port(g, "1." + std::to_string(i + 1), {supply[i], top}, D::Input, true);
    g.workspace.add_particle(unit(id, in({supply[i], top})));
  }
  for (int k = 0; k < n; ++k) {
    add_port(g, "A." + std::to_string(k + 1), outs_a[k], D::Output);
    add_port(g, "~A." + std::to_string(k + 1), outs_n[k], D::Output);
  }
  g.rails = {{"A", "~A"}};
  for (int a : {1, 0}) {
    TruthRow r{{a, 1 - a}, {}};
    for (int k = 0; k < n; ++k) {
      r.outputs.push_back(a);
      r.outputs.push_back(1 - a);
    }
    g.truth_table.push_back(r);
  }
  g.max_width = 4 * n + 7;
  g.max_height = 2 * n + 4;
  return g;
}

Gadget memory_latch() {
  Gadget g;
  g.name = "latch";
  g.clock = kClock;
  // The slider holds Q. Low (Q=1) it shuttles along the floor pit and the
  // ceiling at (0,1) keeps it down. High (Q=0) it drops to row 1, slides to
  // the wall, climbs to row 3 under (1,4) and returns to [6,7]. Set lands on
  // (5,3) and slides to (1,3) where it blocks the climb, so r carries the
  // slider across row 2 to [3,4] and the next d drops it into the pit. Clear
  // ends at (0,0) and stops the slider at [1,2], which then climbs. Read
  // rides over a low slider to M, or passes under a high one to ~M.
  g.workspace = from_art({
      "##..#.##",
      "##..#.##",
      "#.......",
      "#....#..",
      "#.......",
      ".....##.",
  });
  g.workspace.add_particle(slider("S", in({6, 3})));
  add_port(g, "Set", {5, 5}, D::Input);
  add_port(g, "Clear", {2, 5}, D::Input);
  add_port(g, "Read", {3, 5}, D::Input);
  add_port(g, "M", {7, 3}, D::Output);
  add_port(g, "~M", {4, 0}, D::Output);
  g.rails = {{"Set", "Clear", "Read"}};
  g.state = {{"Q", "S", in({6, 3}), in({3, 0})}};
  // Rows in the order of the latch table: (Q, op) -> (M, ~M, Q').
  for (int q : {0, 1})
    for (int op = 0; op < 3; ++op) {
      int set = op == 0, clear = op == 1, read = op == 2;
      int next = set ? 1 : clear ? 0 : q;
      g.truth_table.push_back({{set, clear, read, q}, {next, 1 - next, next}});
    }
  g.max_width = 16;
  g.max_height = 8;
  return g;
}

std::vector<std::string> catalog_names() {
  return {"not", "universal", "xor", "fanout2", "fanout3", "fanout4", "latch"};
}

Gadget catalog_gadget(const std::string& name) {
  if (name == "not") return not_gate();
  if (name == "universal") return universal_gate();
  if (name == "xor") return xor_gate();
  if (name == "latch") return memory_latch();
  if (name.rfind("fanout", 0) == 0 && name.size() > 6) {
    std::string digits = name.substr(6);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) && digits.size() < 4)
      return fanout_gate(std::stoi(digits));
  }
  throw GadgetError("unknown gadget '" + name + "'");
}

// --- evaluation ----------------------------------------------------------

Workspace load_gadget(const Gadget& g, const std::vector<int>& inputs) {
  auto ins = free_inputs(g);
  if (inputs.size() != ins.size() + g.state.size())
    throw GadgetError("gadget " + g.name + " takes " + std::to_string(ins.size() + g.state.size()) +
                      " input bits, got " + std::to_string(inputs.size()));
  for (int b : inputs)
    if (b != 0 && b != 1) throw GadgetError("input bits must be 0 or 1");
  for (const auto& group : g.rails) {
    int set = 0;
    for (std::size_t i = 0; i < ins.size(); ++i)
      if (std::find(group.begin(), group.end(), ins[i]->name) != group.end()) set += inputs[i];
    if (set == 1) continue;
    std::string names;
    for (const auto& n : group) names += (names.empty() ? "" : "/") + n;
    if (group.size() == 2)
      throw GadgetError("illegal dual-rail input on " + names + ": " + (set ? "both rails set" : "both rails clear"));
    throw GadgetError("illegal input on " + names + ": " + std::to_string(set) + " set, exactly one required");
  }
  Workspace ws = g.workspace;
  for (std::size_t i = 0; i < ins.size(); ++i)
    if (inputs[i]) ws.add_particle(unit("in:" + ins[i]->name, ins[i]->cell));
  for (std::size_t s = 0; s < g.state.size(); ++s) {
    const auto& sb = g.state[s];
    const auto& ps = ws.particles();
    for (std::size_t k = 0; k < ps.size(); ++k)
      if (ps[k].id == sb.particle) ws.set_anchor(k, inputs[ins.size() + s] ? sb.one : sb.zero);
  }
  return ws;
}

std::vector<int> read_gadget(const Gadget& g, const Workspace& after) {
  std::vector<int> out;
  for (const Port* p : g.outputs()) {
    const Particle* q = after.particle_at(p->cell);
    out.push_back(q && q->shape == Shape::Unit ? 1 : 0);
  }
  for (const auto& sb : g.state) {
    const Particle* p = after.find(sb.particle);
    if (!p) throw GadgetError("state particle " + sb.particle + " missing");
    Particle zero = *p, one = *p;
    zero.anchor = sb.zero;
    one.anchor = sb.one;
    Cell at = settle_alone(after, *p);
    if (at == settle_alone(after, one))
      out.push_back(1);
    else if (at == settle_alone(after, zero))
      out.push_back(0);
    else
      throw GadgetError("state particle " + sb.particle + " left both states");
  }
  return out;
}

std::vector<int> evaluate_gadget(const Gadget& g, const std::vector<int>& inputs) {
  return read_gadget(g, apply_sequence(load_gadget(g, inputs), g.clock));
}

std::string gadget_sidecar(const Gadget& g) {
  nlohmann::ordered_json j;
  j["name"] = g.name;
  j["clock"] = format_moves(g.clock);
  j["width"] = g.workspace.width();
  j["height"] = g.workspace.height();
  if (g.max_width > 0) j["area_bound"] = {g.max_width, g.max_height};
  j["ports"] = nlohmann::ordered_json::array();
  for (const auto& p : g.ports) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["x"] = p.cell.x;
    pj["y"] = p.cell.y;
    pj["direction"] = p.direction == D::Input ? "input" : "output";
    if (p.preset) pj["preset"] = true;
    j["ports"].push_back(pj);
  }
  j["rails"] = g.rails;
  j["state"] = nlohmann::ordered_json::array();
  for (const auto& s : g.state)
    j["state"].push_back({{"name", s.name}, {"particle", s.particle}, {"zero", {s.zero.x, s.zero.y}}, {"one", {s.one.x, s.one.y}}});
  j["truth_table"] = nlohmann::ordered_json::array();
  for (const auto& r : g.truth_table) j["truth_table"].push_back({{"inputs", r.inputs}, {"outputs", r.outputs}});
  return j.dump(2) + "\n";
}

// --- embedding and checks ------------------------------------------------

Embedding embed_gadget(const Gadget& g, int lead) {
  const Workspace& t = g.workspace;
  Embedding e;
  e.lead = lead;
  e.offset = {0, lead};
  Workspace ws(t.width(), t.height() + 2 * lead);
  for (int y = 1; y < ws.height() - 1; ++y)
    for (int x = 1; x < ws.width() - 1; ++x) ws.set_obstacle({x, y});
  for (int y = 0; y < t.height(); ++y)
    for (int x = 0; x < t.width(); ++x) ws.set_obstacle({x, y + lead}, t.is_obstacle({x, y}));
  for (const Port* p : g.inputs())
    for (int y = t.height() - 1; y < t.height() + lead - 1; ++y) ws.set_obstacle({p->cell.x, y + lead}, false);
  for (const Port* p : g.outputs())
    for (int y = 1; y <= lead; ++y) ws.set_obstacle({p->cell.x, y}, false);
  for (Particle p : t.particles()) {
    p.anchor.y += lead;
    ws.add_particle(p);
  }
  e.workspace = std::move(ws);
  return e;
}

GadgetReport check_gadget(const Gadget& g) {
  GadgetReport rep;
  rep.clock_ok = g.clock == kClock;
  if (!rep.clock_ok) rep.failures.push_back("clock is " + format_moves(g.clock) + ", expected d,l,u,r");
  auto legal = legal_rows(g);
  rep.rows_total = static_cast<int>(legal.size());
  if (g.truth_table.size() != legal.size())
    rep.failures.push_back("truth table has " + std::to_string(g.truth_table.size()) + " rows, " +
                           std::to_string(legal.size()) + " legal inputs");
  for (const auto& row : g.truth_table) {
    if (std::find(legal.begin(), legal.end(), row.inputs) == legal.end()) {
      rep.failures.push_back("row " + bits(row.inputs) + " is not a legal input");
      continue;
    }
    Workspace before = load_gadget(g, row.inputs);
    Workspace after = apply_sequence(before, g.clock);
    auto got = read_gadget(g, after);
    if (got == row.outputs)
      ++rep.rows_ok;
    else
      rep.failures.push_back("row " + bits(row.inputs) + ": expected " + bits(row.outputs) + ", got " + bits(got));
    if (after.particles().size() != before.particles().size()) rep.conserved = false;

    // Same row with the ring punched: inputs fed from the top of their
    // shafts, outputs drained by one more d.
    Embedding e = embed_gadget(g, 3);
    Workspace fed = e.workspace;
    fed.clear_particles();
    int units = 0;
    for (const auto& p : before.particles()) {
      Particle q = p;
      q.anchor.y += e.lead;
      if (p.id.rfind("in:", 0) == 0) q.anchor.y = fed.height() - 2;
      fed.add_particle(q);
    }
    Workspace ran = apply_sequence(fed, g.clock);
    Workspace shifted = after;
    shifted.clear_particles();
    for (Particle p : ran.particles()) {
      p.anchor.y -= e.lead;
      if (p.anchor.y < 1 || p.anchor.y >= after.height() - 1) {
        rep.embedded_ok = false;
        continue;
      }
      shifted.add_particle(p);
    }
    if (rep.embedded_ok && read_gadget(g, shifted) != got) rep.embedded_ok = false;
    Workspace drained = apply_move(ran, Move::Down);
    for (std::size_t k = 0; k < got.size() && k < g.outputs().size(); ++k) {
      if (!got[k]) continue;
      Cell below = {g.outputs()[k]->cell.x, 1};
      const Particle* q = drained.particle_at(below);
      if (!q || q->shape != Shape::Unit) rep.embedded_ok = false;
      ++units;
    }
    int drained_units = 0;
    for (const auto& p : drained.particles())
      if (p.anchor.y < e.lead) ++drained_units;
    if (drained_units != units) rep.embedded_ok = false;
    if (!rep.embedded_ok) rep.failures.push_back("row " + bits(row.inputs) + " differs with the ring punched");
  }
  if (g.max_width > 0 && (g.workspace.width() > g.max_width || g.workspace.height() > g.max_height)) {
    rep.area_ok = false;
    rep.failures.push_back("area " + std::to_string(g.workspace.width()) + "x" + std::to_string(g.workspace.height()) +
                           " exceeds " + std::to_string(g.max_width) + "x" + std::to_string(g.max_height));
  }
  return rep;
}

// --- connectors ----------------------------------------------------------

Connector interconnect(int offset) {
  if (offset == -1) throw GadgetError("unroutable offset -1: a one-cycle connector cannot shift left by one");
  detail::Carver cv;
  Connector c;
  const int top = 0, source_row = 3;
  if (offset == 0) {
    // Sink: fall, jog one cell left under a ceiling and come back.
    cv.col(0, source_row, 0);
    cv.open(-1, 0);
    c.sink = true;
  } else {
    std::vector<detail::Wire> wires = {{0, offset, false}};
    auto plan = detail::plan_route(wires);
    if (!plan) throw GadgetError("unroutable offset " + std::to_string(offset));
    detail::carve_route(cv, wires, *plan, top, top - 3);
    cv.col(0, source_row, top + 1);
  }
  Cell shift;
  c.workspace = cv.finish(shift);
  c.source = detail::translate({0, source_row}, shift);
  c.destination = detail::translate(offset == 0 ? Cell{0, 0} : Cell{offset, top}, shift);
  return c;
}

Stack interconnect(const Gadget& from, const std::string& out_port, const Gadget& to, const std::string& in_port,
                   int offset) {
  const Port& out = from.port(out_port);
  const Port& inp = to.port(in_port);
  if (out.direction != D::Output) throw GadgetError(out_port + " is not an output of " + from.name);
  if (inp.direction != D::Input) throw GadgetError(in_port + " is not an input of " + to.name);
  std::vector<detail::Wire> wires = {{out.cell.x, out.cell.x + offset, false}};
  auto plan = detail::plan_route(wires);
  if (!plan) throw GadgetError("unroutable offset " + std::to_string(offset));

  // Connector rows 0 and -1 with its floor on row -2, which is also the top
  // ring of `to`; `from`'s bottom ring is row 1.
  detail::Carver cv;
  const Workspace& a = from.workspace;
  const Workspace& b = to.workspace;
  Cell fa = {0, 1};  // template (x, y) -> (x + fa.x, y + fa.y)
  Cell fb = {out.cell.x + offset - inp.cell.x, -2 - (b.height() - 1)};
  for (int y = 1; y < a.height() - 1; ++y)
    for (int x = 1; x < a.width() - 1; ++x)
      if (!a.is_obstacle({x, y})) cv.open(x + fa.x, y + fa.y);
  for (int y = 1; y < b.height() - 1; ++y)
    for (int x = 1; x < b.width() - 1; ++x)
      if (!b.is_obstacle({x, y})) cv.open(x + fb.x, y + fb.y);
  detail::carve_route(cv, wires, *plan, 0, -2);
  for (const auto& p : a.particles()) {
    Particle q = p;
    q.anchor = detail::translate(q.anchor, fa);
    cv.put(q);
  }
  for (const auto& p : b.particles()) {
    Particle q = p;
    q.id = "to." + q.id;
    q.anchor = detail::translate(q.anchor, fb);
    cv.put(q);
  }
  Stack s;
  Cell shift;
  s.workspace = cv.finish(shift);
  s.from_offset = detail::translate(fa, shift);
  s.to_offset = detail::translate(fb, shift);
  s.source = detail::translate(out.cell, s.from_offset);
  s.destination = detail::translate(inp.cell, s.to_offset);
  return s;
}

}  // namespace tilt
