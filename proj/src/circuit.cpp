#include "tilt/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "carve.hpp"
#include "json.hpp"
#include "route.hpp"
#include "tilt/gates.hpp"
#include "tilt/io.hpp"

namespace tilt {

using detail::Carver;
using detail::plan_route;
using detail::RoutePlan;
using detail::Wire;
using nlohmann::json;

const char* op_name(Op op) {
  switch (op) {
    case Op::And: return "AND";
    case Op::Or: return "OR";
    case Op::Not: return "NOT";
    case Op::Xor: return "XOR";
    case Op::Nand: return "NAND";
    case Op::Nor: return "NOR";
    case Op::Xnor: return "XNOR";
    case Op::Fanout: return "FANOUT";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------- netlist

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

int arity(Op op) { return op == Op::Not || op == Op::Fanout ? 1 : 2; }

std::string gate_text(const GateNode& g) {
  std::string s = g.id + " = " + op_name(g.op);
  if (g.op == Op::Fanout) s += std::to_string(g.copies);
  for (const auto& o : g.operands) s += " " + o;
  return s;
}

std::string where(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

struct Index {
  std::map<std::string, int> gate;  // id -> gate index
  std::set<std::string> inputs;
};

Index index_of(const CircuitNetlist& n) {
  Index ix;
  for (const auto& i : n.inputs) ix.inputs.insert(i);
  for (std::size_t k = 0; k < n.gates.size(); ++k) ix.gate[n.gates[k].id] = static_cast<int>(k);
  return ix;
}

// Gate producing a signal, -1 for an input. Throws for an undefined name.
int producer(const CircuitNetlist& n, const Index& ix, const std::string& sig, int line) {
  if (ix.inputs.count(sig)) return -1;
  auto dot = sig.find('.');
  if (dot == std::string::npos) {
    auto it = ix.gate.find(sig);
    if (it == ix.gate.end()) throw CircuitError(where(line) + "undefined operand '" + sig + "'");
    const GateNode& g = n.gates[it->second];
    if (g.op == Op::Fanout)
      throw CircuitError(where(line) + "'" + sig + "' is a FANOUT; use " + sig + ".1 .. " + sig + "." +
                         std::to_string(g.copies));
    return it->second;
  }
  std::string base = sig.substr(0, dot), tail = sig.substr(dot + 1);
  auto it = ix.gate.find(base);
  bool digits = !tail.empty() && std::all_of(tail.begin(), tail.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (it == ix.gate.end() || !digits || n.gates[it->second].op != Op::Fanout)
    throw CircuitError(where(line) + "undefined operand '" + sig + "'");
  int j = std::stoi(tail);
  if (j < 1 || j > n.gates[it->second].copies) throw CircuitError(where(line) + "undefined operand '" + sig + "'");
  return it->second;
}

// Gates in dependency order; throws on an undefined operand or a cycle.
std::vector<int> topo_order(const CircuitNetlist& n, const std::vector<int>& output_lines = {}) {
  Index ix = index_of(n);
  std::vector<std::vector<int>> deps(n.gates.size());
  for (std::size_t k = 0; k < n.gates.size(); ++k)
    for (const auto& o : n.gates[k].operands) {
      int p = producer(n, ix, o, n.gates[k].line);
      if (p >= 0) deps[k].push_back(p);
    }
  for (std::size_t k = 0; k < n.outputs.size(); ++k)
    producer(n, ix, n.outputs[k], k < output_lines.size() ? output_lines[k] : 0);
  std::vector<int> state(n.gates.size(), 0), order, stack;
  std::function<void(int)> visit = [&](int v) {
    if (state[v] == 2) return;
    if (state[v] == 1) {
      auto at = std::find(stack.begin(), stack.end(), v);
      std::string path;
      for (auto it = at; it != stack.end(); ++it) path += n.gates[*it].id + " -> ";
      throw CircuitError(where(n.gates[v].line) + "cycle detected: " + path + n.gates[v].id);
    }
    state[v] = 1;
    stack.push_back(v);
    for (int d : deps[v]) visit(d);
    stack.pop_back();
    state[v] = 2;
    order.push_back(v);
  };
  for (std::size_t k = 0; k < n.gates.size(); ++k) visit(static_cast<int>(k));
  return order;
}

std::map<std::string, int> use_counts(const CircuitNetlist& n) {
  std::map<std::string, int> uses;
  for (const auto& g : n.gates)
    for (const auto& o : g.operands) ++uses[o];
  for (const auto& o : n.outputs) ++uses[o];
  return uses;
}

void check_single_use(const CircuitNetlist& n) {
  for (const auto& [sig, k] : use_counts(n))
    if (k > 1)
      throw CircuitError("fan-out violation: signal '" + sig + "' feeds " + std::to_string(k) +
                         " inputs; route it through a FANOUT");
}

}  // namespace

CircuitNetlist parse_netlist(std::string_view text, bool insert_fanout) {
  CircuitNetlist n;
  std::set<std::string> names;
  std::vector<int> output_lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto define = [&](const std::string& id) {
      if (!valid_name(id)) throw CircuitError(where(line) + "invalid name '" + id + "'");
      if (!names.insert(id).second) throw CircuitError(where(line) + "'" + id + "' defined twice");
    };
    if (tok[0] == "INPUT") {
      if (tok.size() != 2) throw CircuitError(where(line) + "expected 'INPUT <name>'");
      define(tok[1]);
      n.inputs.push_back(tok[1]);
    } else if (tok[0] == "OUTPUT") {
      if (tok.size() != 2) throw CircuitError(where(line) + "expected 'OUTPUT <name>'");
      n.outputs.push_back(tok[1]);
      output_lines.push_back(line);
    } else {
      if (tok.size() < 3 || tok[1] != "=") throw CircuitError(where(line) + "expected '<id> = <OP> <operands>'");
      GateNode g;
      g.id = tok[0];
      g.line = line;
      const std::string& op = tok[2];
      static const std::map<std::string, Op> ops = {{"AND", Op::And},   {"OR", Op::Or},   {"NOT", Op::Not},
                                                    {"XOR", Op::Xor},   {"NAND", Op::Nand}, {"NOR", Op::Nor},
                                                    {"XNOR", Op::Xnor}};
      if (auto it = ops.find(op); it != ops.end()) {
        g.op = it->second;
      } else if (op.rfind("FANOUT", 0) == 0 && op.size() > 6 &&
                 std::all_of(op.begin() + 6, op.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        g.op = Op::Fanout;
        g.copies = std::stoi(op.substr(6));
        if (g.copies < 2) throw CircuitError(where(line) + "FANOUT needs at least 2 copies");
      } else {
        throw CircuitError(where(line) + "unknown operator '" + op + "'");
      }
      g.operands.assign(tok.begin() + 3, tok.end());
      if (static_cast<int>(g.operands.size()) != arity(g.op))
        throw CircuitError(where(line) + op + " takes " + std::to_string(arity(g.op)) + " operand(s), got " +
                           std::to_string(g.operands.size()));
      define(g.id);
      n.gates.push_back(std::move(g));
    }
  }
  topo_order(n, output_lines);
  if (insert_fanout) return auto_fanout(n);
  check_single_use(n);
  return n;
}

std::string format_netlist(const CircuitNetlist& n) {
  std::string s;
  for (const auto& i : n.inputs) s += "INPUT " + i + "\n";
  for (const auto& g : n.gates) s += gate_text(g) + "\n";
  for (const auto& o : n.outputs) s += "OUTPUT " + o + "\n";
  return s;
}

CircuitNetlist auto_fanout(const CircuitNetlist& n) {
  topo_order(n);
  auto uses = use_counts(n);
  CircuitNetlist out = n;
  std::set<std::string> taken;
  for (const auto& i : n.inputs) taken.insert(i);
  for (const auto& g : n.gates) taken.insert(g.id);
  std::map<std::string, std::pair<std::string, int>> copy;  // signal -> (fan-out id, next copy)
  for (const auto& [sig, k] : uses) {
    if (k < 2) continue;
    std::string base;
    for (char c : sig) base += c == '.' ? '_' : c;
    std::string id = base + "_fo";
    for (int s = 2; taken.count(id); ++s) id = base + "_fo" + std::to_string(s);
    taken.insert(id);
    GateNode f;
    f.id = id;
    f.op = Op::Fanout;
    f.copies = k;
    f.operands = {sig};
    out.gates.push_back(f);
    copy[sig] = {id, 1};
  }
  auto rename = [&](std::string& s) {
    auto it = copy.find(s);
    if (it == copy.end()) return;
    s = it->second.first + "." + std::to_string(it->second.second++);
  };
  for (std::size_t k = 0; k < n.gates.size(); ++k)
    for (auto& o : out.gates[k].operands) rename(o);
  for (auto& o : out.outputs) rename(o);
  return out;
}

std::map<std::string, bool> evaluate_netlist(const CircuitNetlist& n, const std::map<std::string, bool>& inputs) {
  std::map<std::string, bool> v;
  for (const auto& i : n.inputs) {
    auto it = inputs.find(i);
    if (it == inputs.end()) throw CircuitError("missing input bit '" + i + "'");
    v[i] = it->second;
  }
  for (int k : topo_order(n)) {
    const GateNode& g = n.gates[k];
    bool a = v.at(g.operands[0]);
    bool b = g.operands.size() > 1 ? v.at(g.operands[1]) : false;
    switch (g.op) {
      case Op::And: v[g.id] = a && b; break;
      case Op::Or: v[g.id] = a || b; break;
      case Op::Not: v[g.id] = !a; break;
      case Op::Xor: v[g.id] = a != b; break;
      case Op::Nand: v[g.id] = !(a && b); break;
      case Op::Nor: v[g.id] = !(a || b); break;
      case Op::Xnor: v[g.id] = a == b; break;
      case Op::Fanout:
        for (int j = 1; j <= g.copies; ++j) v[g.id + "." + std::to_string(j)] = a;
        break;
    }
  }
  std::map<std::string, bool> out;
  for (const auto& o : n.outputs) out[o] = v.at(o);
  return out;
}

GateCount count_gates(const CircuitNetlist& n) {
  GateCount c;
  for (const auto& g : n.gates) switch (g.op) {
      case Op::Fanout: ++c.fanouts; break;
      case Op::Xor:
      case Op::Xnor: ++c.xors; break;
      case Op::And:
      case Op::Nand: ++c.ands; break;
      case Op::Or:
      case Op::Nor: ++c.ors; break;
      case Op::Not: ++c.nots; break;
    }
  return c;
}

// ------------------------------------------------------------- dual rail

DualRailCircuit lower_to_dual_rail(const CircuitNetlist& n) {
  check_single_use(n);
  DualRailCircuit d;
  std::map<std::string, std::pair<int, int>> sig;
  std::map<std::string, int> level;
  auto rail = [&](int lv) {
    d.ready.push_back(lv);
    return d.rails++;
  };
  auto pair = [&](int lv) { return std::pair<int, int>{rail(lv), rail(lv)}; };
  for (const auto& i : n.inputs) {
    sig[i] = pair(0);
    level[i] = 0;
    d.inputs.push_back({i, sig[i]});
  }
  for (int k : topo_order(n)) {
    const GateNode& g = n.gates[k];
    auto a = sig.at(g.operands[0]);
    int lv = level.at(g.operands[0]);
    if (g.op == Op::Not) {
      sig[g.id] = {a.second, a.first};
      level[g.id] = lv;
      continue;
    }
    RailGadget rg;
    rg.node = g.id;
    rg.inputs = {{"A", a.first}, {"~A", a.second}};
    std::pair<int, int> b{-1, -1};
    if (arity(g.op) == 2) {
      b = sig.at(g.operands[1]);
      lv = std::max(lv, level.at(g.operands[1]));
      rg.inputs.push_back({"B", b.first});
      rg.inputs.push_back({"~B", b.second});
    }
    rg.level = lv;
    auto out = [&](const std::string& port) {
      int r = rail(lv + 1);
      rg.outputs.push_back({port, r});
      return r;
    };
    switch (g.op) {
      case Op::And:
      case Op::Nand:
      case Op::Or:
      case Op::Nor: {
        rg.kind = "universal";
        int a_and = out("AND"), a_nand = out("NAND"), a_or = out("OR"), a_nor = out("NOR");
        if (g.op == Op::And) sig[g.id] = {a_and, a_nand};
        if (g.op == Op::Nand) sig[g.id] = {a_nand, a_and};
        if (g.op == Op::Or) sig[g.id] = {a_or, a_nor};
        if (g.op == Op::Nor) sig[g.id] = {a_nor, a_or};
        bool and_side = g.op == Op::And || g.op == Op::Nand;
        d.waste.push_back(and_side ? std::vector<int>{a_or, a_nor} : std::vector<int>{a_and, a_nand});
        break;
      }
      case Op::Xor:
      case Op::Xnor: {
        rg.kind = "xor";
        int x = out("XOR"), xn = out("XNOR"), one = out("1"), zero = out("0");
        sig[g.id] = g.op == Op::Xor ? std::pair{x, xn} : std::pair{xn, x};
        d.waste.push_back({one});
        d.dropped.push_back(zero);
        break;
      }
      case Op::Fanout: {
        rg.kind = "fanout" + std::to_string(g.copies);
        for (int i = 1; i < g.copies; ++i) {
          int s = rail(0);
          d.supplies.push_back(s);
          rg.inputs.push_back({"1." + std::to_string(i), s});
        }
        for (int j = 1; j <= g.copies; ++j) {
          int t = out("A." + std::to_string(j)), f = out("~A." + std::to_string(j));
          sig[g.id + "." + std::to_string(j)] = {t, f};
          level[g.id + "." + std::to_string(j)] = lv + 1;
        }
        break;
      }
      case Op::Not: break;
    }
    level[g.id] = lv + 1;
    d.stages = std::max(d.stages, lv + 1);
    d.gadgets.push_back(std::move(rg));
  }
  // Signals nobody reads are waste too.
  auto uses = use_counts(n);
  for (const auto& [name, r] : sig)
    if (!uses.count(name)) d.waste.push_back({r.first, r.second});
  for (const auto& o : n.outputs) {
    d.outputs.push_back({o, sig.at(o)});
    d.stages = std::max(d.stages, level.at(o));
  }
  return d;
}

// ---------------------------------------------------------------- layout

namespace {

struct Instance {
  int gadget = -1;  // index into DualRailCircuit::gadgets
  Gadget g;
};

// One gate band: gadgets side by side, then a block of delay wires.
struct GateBand {
  std::vector<int> order;  // gadget indices left to right
  std::vector<int> delays; // rails passing through
  int height = 0;
};

constexpr int kGap = 1;

// Relative layout of a gate band for a given gadget order; columns are
// relative to the band's left edge.
struct BandShape {
  std::map<int, int> entry;  // rail -> column
  std::map<int, int> exit;   // rail -> column
  std::vector<int> gadget_x;
  int delay_x = 0;
  int width = 0;
};

int delay_from(int base, int k) { return base + 2 + 4 * k; }

class Layout {
 public:
  Layout(const DualRailCircuit& d, const PlaceOptions& opt) : d_(d), opt_(opt) {
    loop_ = !opt.feedback.empty();
    for (const auto& rg : d.gadgets) templates_.push_back(catalog_gadget(rg.kind));
    stages_ = d.stages;
    bands_ = 2 * stages_;
    dies_.assign(d.rails, -2);
    born_.assign(d.rails, -1);
    for (std::size_t k = 0; k < d.gadgets.size(); ++k) {
      const auto& rg = d.gadgets[k];
      for (const auto& [p, r] : rg.inputs) dies_[r] = 2 * rg.level;
      for (const auto& [p, r] : rg.outputs) born_[r] = 2 * rg.level;
    }
    for (int r : d.dropped) dropped_.insert(r);
    int last = bands_ - 1;
    for (const auto& [name, r] : d.outputs) dies_[r.first] = dies_[r.second] = last;
    for (const auto& w : d.waste)
      for (int r : w) dies_[r] = loop_ ? last : (born_[r] < 0 ? 1 : born_[r] + 1);
    for (int r = 0; r < d.rails; ++r)
      if (!dropped_.count(r) && dies_[r] < 0) throw CircuitError("internal: rail " + std::to_string(r) + " has no end");
  }

  PlacedCircuit run() {
    // Band 0 sits at the top; rows grow downward into negative y.
    int y = 0;
    std::map<int, int> cols;  // live rail -> column it leaves the last band in
    BandShape shape0 = shape_of(gadgets_at(0), live_through(0), 0);
    place_gate_band(0, gadgets_at(0), live_through(0), shape0, 0, y);
    entry0_ = shape0.entry;
    for (auto& [r, c] : shape0.entry) band0_entries_[r] = c;
    cols = exits_;
    for (int b = 1; b < bands_; b += 2) {
      bool final = b == bands_ - 1;
      if (final && loop_) {
        place_return_band(cols, y);
        break;
      }
      // Wires of this routing band and the layout of the next gate band.
      std::vector<int> through, sinks;
      for (auto& [r, c] : cols) (dies_[r] == b ? sinks : through).push_back(r);
      if (final) {
        route_band(b, cols, {}, sinks, nullptr, y);
        break;
      }
      std::vector<int> gadgets = gadgets_at(b + 1), delays = live_through(b + 1);
      route_band(b, cols, gadgets, sinks, &delays, y);
      cols = exits_;
    }
    return finish();
  }

 private:
  const DualRailCircuit& d_;
  const PlaceOptions& opt_;
  bool loop_ = false;
  int stages_ = 1, bands_ = 2;
  std::vector<Gadget> templates_;
  std::vector<int> dies_, born_;
  std::set<int> dropped_;
  Carver cv_;
  std::map<int, int> exits_;           // rail -> exit column of the band just placed
  std::map<int, int> entry0_, band0_entries_;
  std::map<int, Cell> input_cell_;     // rail -> cell receiving its particle
  std::map<int, Cell> output_cell_;    // rail -> cell read at the end
  int band0_top_ = 0;
  int sliders_ = 0;
  std::vector<int> shifts_;
  std::vector<Cell> rest_;
  int min_x_ = 0, max_x_ = 0;
  bool any_x_ = false;

  void note_x(int lo, int hi) {
    if (!any_x_ || lo < min_x_) min_x_ = lo;
    if (!any_x_ || hi > max_x_) max_x_ = hi;
    any_x_ = true;
  }

  std::vector<int> gadgets_at(int band) const {
    std::vector<int> v;
    for (std::size_t k = 0; k < d_.gadgets.size(); ++k)
      if (2 * d_.gadgets[k].level == band) v.push_back(static_cast<int>(k));
    return v;
  }

  bool live_at(int r, int band) const {
    if (dropped_.count(r)) return false;
    return born_[r] < band && dies_[r] >= band;
  }

  // Rails entering gate band `band` that are not consumed there.
  std::vector<int> live_through(int band) const {
    std::vector<int> v;
    for (int r = 0; r < d_.rails; ++r)
      if (live_at(r, band) && dies_[r] != band) v.push_back(r);
    return v;
  }

  BandShape shape_of(const std::vector<int>& gadgets, const std::vector<int>& delays, int base) const {
    BandShape s;
    int x = base;
    for (int k : gadgets) {
      const Gadget& g = templates_[k];
      s.gadget_x.push_back(x);
      for (const auto& [port, r] : d_.gadgets[k].inputs) s.entry[r] = x + g.port(port).cell.x;
      for (const auto& [port, r] : d_.gadgets[k].outputs)
        if (!dropped_.count(r)) s.exit[r] = x + g.port(port).cell.x;
      x += g.workspace.width() + kGap;
    }
    s.delay_x = x;
    for (std::size_t k = 0; k < delays.size(); ++k) {
      int from = delay_from(x, static_cast<int>(k));
      s.entry[delays[k]] = from;
      s.exit[delays[k]] = from + 1;
    }
    s.width = (delays.empty() ? x : delay_from(x, static_cast<int>(delays.size()) - 1) + 3) - base;
    return s;
  }

  void place_gate_band(int band, const std::vector<int>& gadgets, const std::vector<int>& delays, const BandShape& s,
                       int base, int& y) {
    (void)base;
    int top = y;
    if (band == 0) band0_top_ = top;
    std::vector<Wire> wires;
    for (int r : delays) wires.push_back({s.entry.at(r), s.exit.at(r), false});
    auto plan = plan_route(wires);
    if (!plan) throw CircuitError("internal: delay block unroutable in band " + std::to_string(band));
    int height = plan->height;
    for (int k : gadgets) height = std::max(height, templates_[k].workspace.height() - 2);
    int exit_row = top - height;
    for (std::size_t i = 0; i < gadgets.size(); ++i) {
      int k = gadgets[i];
      const Gadget& g = templates_[k];
      int gx = s.gadget_x[i], gh = g.workspace.height();
      auto map = [&](Cell c) { return Cell{gx + c.x, top - (gh - 2 - c.y)}; };
      for (int ty = 1; ty < gh - 1; ++ty)
        for (int tx = 1; tx < g.workspace.width() - 1; ++tx)
          if (!g.workspace.is_obstacle({tx, ty})) cv_.open(map({tx, ty}));
      for (const auto& [port, r] : d_.gadgets[k].inputs) {
        Cell c = map(g.port(port).cell);
        cv_.open(c.x, top + 1);
        if (band == 0) input_cell_[r] = c;
      }
      for (const auto& [port, r] : d_.gadgets[k].outputs)
        if (!dropped_.count(r)) {
          Cell c = map(g.port(port).cell);
          cv_.col(c.x, c.y, exit_row);
        }
      for (const Particle& p : g.workspace.particles())
        if (p.shape != Shape::Unit) {
          Particle q = p;
          q.id = "S" + std::to_string(sliders_++);
          q.label = 'S';
          q.anchor = map(p.anchor);
          cv_.put(q);
        }
      note_x(gx, gx + g.workspace.width() - 1);
    }
    if (!wires.empty()) {
      for (const auto& w : wires) shifts_.push_back(w.to - w.from);
      detail::carve_route(cv_, wires, *plan, top, exit_row);
      auto [lo, hi] = detail::route_span(wires);
      note_x(lo, hi);
      if (band == 0)
        for (int r : delays) input_cell_[r] = {s.entry.at(r), top};
    }
    exits_ = s.exit;
    y = exit_row - 1;
  }

  // Routing band `b` from `cols`, then gate band b+1 (unless final).
  void route_band(int b, const std::map<int, int>& cols, const std::vector<int>& gadgets, const std::vector<int>& sinks,
                  const std::vector<int>* delays, int& y) {
    int lo = INT32_MAX, hi = INT32_MIN;
    double mean = 0;
    for (auto& [r, c] : cols) {
      lo = std::min(lo, c);
      hi = std::max(hi, c);
      mean += c;
    }
    mean /= std::max<std::size_t>(1, cols.size());

    // Candidate gadget orders: by barycenter of the source columns, then
    // rotations of it.
    std::vector<int> order = gadgets;
    auto bary = [&](int k) {
      double s = 0;
      int n = 0;
      for (const auto& [p, r] : d_.gadgets[k].inputs)
        if (cols.count(r)) s += cols.at(r), ++n;
      return n ? s / n : 1e9;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int c) { return bary(a) < bary(c); });
    std::vector<std::vector<int>> orders = {order};
    for (std::size_t i = 1; i < order.size(); ++i) {
      auto o = order;
      std::rotate(o.begin(), o.begin() + i, o.end());
      orders.push_back(o);
    }
    if (order.size() <= 4) {
      auto o = order;
      std::sort(o.begin(), o.end());
      do orders.push_back(o);
      while (std::next_permutation(o.begin(), o.end()));
    }
    std::vector<int> dl = delays ? *delays : std::vector<int>{};
    std::vector<std::vector<int>> delay_orders = {dl};
    {
      auto o = dl;
      std::stable_sort(o.begin(), o.end(), [&](int a, int c) { return cols.at(a) < cols.at(c); });
      delay_orders.insert(delay_orders.begin(), o);
      std::reverse(o.begin(), o.end());
      delay_orders.push_back(o);
    }

    for (const auto& dord : delay_orders)
      for (const auto& ord : orders) {
        BandShape probe = shape_of(ord, dord, 0);
        int pref = static_cast<int>(mean) - probe.width / 2;
        int span = (hi - lo) + probe.width + 16;
        for (int step = 0; step <= 2 * span; ++step) {
          int base = pref + (step % 2 ? (step + 1) / 2 : -(step / 2));
          BandShape s = shape_of(ord, dord, base);
          std::vector<Wire> wires;
          std::vector<int> rails;
          int right = std::max(hi, s.width ? base + s.width : hi);
          for (auto& [r, c] : cols)
            if (dies_[r] != b) {
              auto it = s.entry.find(r);
              if (it == s.entry.end()) throw CircuitError("internal: rail lost between bands");
              wires.push_back({c, it->second, false});
              rails.push_back(r);
              right = std::max(right, it->second);
            }
          // Sinks go far right in order of their source columns.
          std::vector<int> sk = sinks;
          std::sort(sk.begin(), sk.end(), [&](int a, int c) { return cols.at(a) < cols.at(c); });
          for (std::size_t i = 0; i < sk.size(); ++i) {
            wires.push_back({cols.at(sk[i]), right + 3 + 3 * static_cast<int>(i), true});
            rails.push_back(sk[i]);
          }
          auto plan = plan_route(wires);
          if (!plan) continue;
          int top = y;
          int exit_row = top - plan->height;
          detail::carve_route(cv_, wires, *plan, top, exit_row);
          auto [wl, wh] = detail::route_span(wires);
          note_x(wl, wh);
          for (std::size_t k = 0; k < wires.size(); ++k) {
            shifts_.push_back(wires[k].to - wires[k].from);
            if (!wires[k].sink) continue;
            output_cell_[rails[k]] = detail::route_end(wires, *plan, k, top);
            rest_.push_back(output_cell_[rails[k]]);
          }
          y = exit_row - 1;
          check_size();
          if (delays) place_gate_band(b + 1, ord, dord, s, base, y);
          check_size();
          return;
        }
      }
    throw CircuitError("unroutable: no placement of band " + std::to_string(b + 1) + " fits the column discipline");
  }

  // Last routing band of a closed loop: every particle falls to its floor,
  // slides left into its own shaft, rises past the whole circuit into the
  // header and slides right over its column in band 0.
  void place_return_band(const std::map<int, int>& cols, int& y) {
    std::map<std::string, std::pair<int, int>> in_rails, out_rails;
    for (const auto& [n, r] : d_.inputs) in_rails[n] = r;
    for (const auto& [n, r] : d_.outputs) out_rails[n] = r;
    struct Ret {
      int rail, from, to;
      bool output;
    };
    std::vector<Ret> rets;
    for (const auto& [out, in] : opt_.feedback) {
      auto o = out_rails.at(out);
      auto i = in_rails.at(in);
      rets.push_back({o.first, cols.at(o.first), entry0_.at(i.first), true});
      rets.push_back({o.second, cols.at(o.second), entry0_.at(i.second), true});
    }
    // Waste comes back as supply; both rails of a pair share one target.
    std::vector<int> supplies = d_.supplies;
    std::sort(supplies.begin(), supplies.end(), [&](int a, int c) { return entry0_.at(a) < entry0_.at(c); });
    std::vector<std::vector<int>> waste = d_.waste;
    std::sort(waste.begin(), waste.end(), [&](const auto& a, const auto& c) { return cols.at(a[0]) < cols.at(c[0]); });
    if (waste.size() != supplies.size())
      throw CircuitError("closed loop needs as much waste as supply: " + std::to_string(waste.size()) + " vs " +
                         std::to_string(supplies.size()));
    for (std::size_t i = 0; i < waste.size(); ++i)
      for (int r : waste[i]) rets.push_back({r, cols.at(r), entry0_.at(supplies[i]), false});
    if (rets.size() != cols.size()) throw CircuitError("closed loop leaves rails unreturned");
    // Larger targets get the lower header rows and the inner shafts.
    std::stable_sort(rets.begin(), rets.end(), [](const Ret& a, const Ret& c) { return a.to > c.to; });
    int top = y;
    int x0 = min_x_ - 2;
    int g0 = band0_top_ + 2;
    for (std::size_t k = 0; k < rets.size(); ++k) {
      int ki = static_cast<int>(k);
      int f = top - 2 * ki, x = x0 - 2 * ki, g = g0 + 2 * ki;
      const Ret& r = rets[k];
      cv_.col(r.from, top + 1, f);
      cv_.row(f, x, r.from);
      cv_.col(x, f, g);
      cv_.row(g, x, r.to);
      cv_.col(r.to, g, band0_top_ + 1);
      if (r.output) output_cell_[r.rail] = {r.to, g};
      rest_.push_back({r.to, g});
      note_x(x - 1, std::max(r.from, r.to + 1));
    }
    y = top - 2 * static_cast<int>(rets.size());
    check_size();
  }

  void check_size() const {
    auto [lo, hi] = cv_.bounds();
    int w = hi.x - lo.x + 3, h = hi.y - lo.y + 3;
    if (w > opt_.max_width || h > opt_.max_height)
      throw CircuitError("unroutable: layout needs " + std::to_string(w) + "x" + std::to_string(h) +
                         ", exceeding the " + std::to_string(opt_.max_width) + "x" +
                         std::to_string(opt_.max_height) + " limit");
  }

  PlacedCircuit finish() {
    check_size();
    PlacedCircuit pc;
    Cell shift;
    pc.workspace = cv_.finish(shift);
    auto at = [&](Cell c) { return detail::translate(c, shift); };
    for (const auto& [name, r] : d_.inputs) pc.inputs[name] = {at(input_cell_.at(r.first)), at(input_cell_.at(r.second))};
    for (const auto& [name, r] : d_.outputs)
      pc.outputs[name] = {at(output_cell_.at(r.first)), at(output_cell_.at(r.second))};
    for (int s : d_.supplies) pc.supplies.push_back(at(input_cell_.at(s)));
    pc.stage_count = stages_;
    pc.cycles_per_evaluation = bands_;
    pc.loop = loop_;
    pc.sliders = sliders_;
    pc.shifts = shifts_;
    for (Cell c : rest_) pc.rest.push_back(at(c));
    std::sort(pc.rest.begin(), pc.rest.end());
    pc.rest.erase(std::unique(pc.rest.begin(), pc.rest.end()), pc.rest.end());
    pc.units = static_cast<int>(d_.inputs.size() + d_.supplies.size());
    return pc;
  }
};

}  // namespace

PlacedCircuit place_and_route(const CircuitNetlist& n, const PlaceOptions& opt) {
  if (n.outputs.empty()) throw CircuitError("netlist has no outputs");
  DualRailCircuit d = lower_to_dual_rail(n);
  for (const auto& [out, in] : opt.feedback) {
    if (std::find(n.outputs.begin(), n.outputs.end(), out) == n.outputs.end())
      throw CircuitError("feedback names unknown output '" + out + "'");
    if (std::find(n.inputs.begin(), n.inputs.end(), in) == n.inputs.end())
      throw CircuitError("feedback names unknown input '" + in + "'");
  }
  if (!opt.feedback.empty() && opt.feedback.size() != n.outputs.size())
    throw CircuitError("a closed loop must feed back every output");
  PlacedCircuit pc = Layout(d, opt).run();
  pc.gates = count_gates(n);
  return pc;
}

Workspace load_circuit(const PlacedCircuit& c, const std::map<std::string, bool>& inputs) {
  Workspace w = c.workspace;
  int id = 0;
  auto put = [&](Cell cell) {
    Particle p;
    p.id = "u" + std::to_string(id++);
    p.label = 'o';
    p.anchor = cell;
    w.add_particle(p);
  };
  for (const auto& [name, cells] : c.inputs) {
    auto it = inputs.find(name);
    if (it == inputs.end()) throw CircuitError("missing input bit '" + name + "'");
    put(it->second ? cells.first : cells.second);
  }
  for (const auto& [name, v] : inputs)
    if (!c.inputs.count(name)) throw CircuitError("unknown input '" + name + "'");
  for (Cell s : c.supplies) put(s);
  return w;
}

std::map<std::string, bool> read_circuit(const PlacedCircuit& c, const Workspace& w) {
  std::map<std::string, bool> out;
  for (const auto& [name, cells] : c.outputs) {
    auto unit_at = [&](Cell x) {
      const Particle* p = w.particle_at(x);
      return p && p->shape == Shape::Unit;
    };
    bool t = unit_at(cells.first), f = unit_at(cells.second);
    if (t == f)
      throw CircuitError("rails of '" + name + "' are not complementary (" + (t ? "both set" : "both clear") + ")");
    out[name] = t;
  }
  return out;
}

std::vector<std::map<std::string, bool>> run_circuit(const PlacedCircuit& c, const std::map<std::string, bool>& inputs,
                                                     int evaluations) {
  Workspace w = load_circuit(c, inputs);
  Slider slider(w);
  auto anchors = slider.anchors_of(w);
  std::vector<std::map<std::string, bool>> out;
  for (int e = 0; e < evaluations; ++e) {
    for (int k = 0; k < c.cycles_per_evaluation; ++k)
      for (Move m : kClock) slider.apply(anchors, m);
    for (std::size_t i = 0; i < anchors.size(); ++i) w.set_anchor(i, anchors[i]);
    out.push_back(read_circuit(c, w));
  }
  return out;
}

CircuitNetlist counter_netlist(int bits) {
  if (bits < 2) throw CircuitError("a counter needs at least 2 bits, got " + std::to_string(bits));
  // Uses of each state bit: q0 feeds the NOT and the first XOR, q_i feeds
  // XOR i, and each carry c_k = q0 & .. & q_k takes its own copy of q0..q_k.
  std::vector<int> uses(bits, 1);
  uses[0] = 2;
  for (int k = 1; k <= bits - 2; ++k)
    for (int i = 0; i <= k; ++i) ++uses[i];
  std::ostringstream s;
  for (int i = 0; i < bits; ++i) s << "INPUT q" << i << "\n";
  std::vector<int> next(bits, 1);
  for (int i = 0; i < bits; ++i)
    if (uses[i] > 1) s << "f" << i << " = FANOUT" << uses[i] << " q" << i << "\n";
  auto copy = [&](int i) {
    if (uses[i] == 1) return "q" + std::to_string(i);
    return "f" + std::to_string(i) + "." + std::to_string(next[i]++);
  };
  s << "n0 = NOT " << copy(0) << "\n";
  std::string carry = copy(0);  // c_0 = q0
  for (int i = 1; i < bits; ++i) {
    s << "n" << i << " = XOR " << copy(i) << " " << carry << "\n";
    if (i == bits - 1) break;
    // c_i as a balanced AND tree over fresh copies of q0..q_i.
    std::vector<std::string> layer;
    for (int j = 0; j <= i; ++j) layer.push_back(copy(j));
    int m = 0;
    while (layer.size() > 1) {
      std::vector<std::string> up;
      for (std::size_t j = 0; j + 1 < layer.size(); j += 2) {
        std::string id = "c" + std::to_string(i) + "_" + std::to_string(m++);
        if (layer.size() == 2) id = "c" + std::to_string(i);
        s << id << " = AND " << layer[j] << " " << layer[j + 1] << "\n";
        up.push_back(id);
      }
      if (layer.size() % 2) up.push_back(layer.back());
      layer = up;
    }
    carry = layer[0];
  }
  for (int i = 0; i < bits; ++i) s << "OUTPUT n" << i << "\n";
  return parse_netlist(s.str());
}

PlacedCircuit build_counter(int bits) {
  CircuitNetlist n = counter_netlist(bits);
  PlaceOptions opt;
  for (int i = 0; i < bits; ++i) opt.feedback["n" + std::to_string(i)] = "q" + std::to_string(i);
  return place_and_route(n, opt);
}

// ------------------------------------------------------------------ JSON

namespace {
json cell_json(Cell c) { return json::array({c.x, c.y}); }
Cell json_cell(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }
json rails_json(const std::map<std::string, std::pair<Cell, Cell>>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[k] = {{"true", cell_json(v.first)}, {"false", cell_json(v.second)}};
  return o;
}
std::map<std::string, std::pair<Cell, Cell>> json_rails(const json& j) {
  std::map<std::string, std::pair<Cell, Cell>> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = {json_cell(it->at("true")), json_cell(it->at("false"))};
  return m;
}
}  // namespace

std::string placed_to_json(const PlacedCircuit& c) {
  json j;
  j["kind"] = "placed-circuit";
  j["stage_count"] = c.stage_count;
  j["cycles_per_evaluation"] = c.cycles_per_evaluation;
  j["loop"] = c.loop;
  j["inputs"] = rails_json(c.inputs);
  j["outputs"] = rails_json(c.outputs);
  j["supplies"] = json::array();
  for (Cell s : c.supplies) j["supplies"].push_back(cell_json(s));
  j["gates"] = {{"fanout", c.gates.fanouts}, {"xor", c.gates.xors}, {"and", c.gates.ands}, {"or", c.gates.ors},
                {"not", c.gates.nots}};
  j["sliders"] = c.sliders;
  j["shifts"] = c.shifts;
  j["rest"] = json::array();
  for (Cell r : c.rest) j["rest"].push_back(cell_json(r));
  j["units"] = c.units;
  j["workspace"] = json::parse(serialize_workspace(c.workspace, Format::Json));
  return j.dump(1) + "\n";
}

PlacedCircuit placed_from_json(std::string_view text) {
  try {
    json j = json::parse(text);
    if (j.value("kind", "") != "placed-circuit") throw CircuitError("not a placed circuit");
    PlacedCircuit c;
    c.stage_count = j.at("stage_count").get<int>();
    c.cycles_per_evaluation = j.at("cycles_per_evaluation").get<int>();
    c.loop = j.at("loop").get<bool>();
    c.inputs = json_rails(j.at("inputs"));
    c.outputs = json_rails(j.at("outputs"));
    for (const auto& s : j.at("supplies")) c.supplies.push_back(json_cell(s));
    const auto& g = j.at("gates");
    c.gates = {g.at("fanout").get<int>(), g.at("xor").get<int>(), g.at("and").get<int>(), g.at("or").get<int>(),
               g.at("not").get<int>()};
    c.sliders = j.at("sliders").get<int>();
    c.shifts = j.at("shifts").get<std::vector<int>>();
    for (const auto& r : j.at("rest")) c.rest.push_back(json_cell(r));
    c.units = j.at("units").get<int>();
    c.workspace = parse_workspace(j.at("workspace").dump());
    return c;
  } catch (const json::exception& e) {
    throw CircuitError(std::string("malformed placed circuit: ") + e.what());
  }
}

}  // namespace tilt
