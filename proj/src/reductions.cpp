#include "tilt/reductions.hpp"

#include <algorithm>
#include <climits>
#include <sstream>
#include <stdexcept>

#include "carve.hpp"

namespace tilt {

void CnfFormula::validate() const {
  if (n < 1) throw std::invalid_argument("formula needs at least one variable");
  if (clauses.empty()) throw std::invalid_argument("formula needs at least one clause");
  for (std::size_t j = 0; j < clauses.size(); ++j) {
    if (clauses[j].size() != 3)
      throw std::invalid_argument("clause " + std::to_string(j + 1) + " does not have exactly 3 literals");
    for (const auto& l : clauses[j])
      if (l.var < 1 || l.var > n)
        throw std::invalid_argument("clause " + std::to_string(j + 1) + " uses variable " + std::to_string(l.var) +
                                    " outside 1.." + std::to_string(n));
  }
}

bool CnfFormula::evaluate(const std::vector<bool>& a) const {
  if (static_cast<int>(a.size()) != n) throw std::invalid_argument("assignment size mismatch");
  for (const auto& c : clauses) {
    bool sat = false;
    for (const auto& l : c) sat = sat || (a[l.var - 1] == l.positive);
    if (!sat) return false;
  }
  return true;
}

CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  int declared = -1;
  Clause current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == 'c' || tok[0] == '%') continue;
    if (tok == "p") {
      std::string kind;
      if (!(ls >> kind >> f.n >> declared) || kind != "cnf")
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'p cnf <vars> <clauses>'");
      continue;
    }
    if (declared < 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": clause before header");
    do {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      }
      if (v == 0) {
        f.clauses.push_back(current);
        current.clear();
      } else {
        current.push_back({std::abs(v), v > 0});
      }
    } while (ls >> tok);
  }
  if (declared < 0) throw std::invalid_argument("missing 'p cnf' header");
  if (!current.empty()) throw std::invalid_argument("last clause is not terminated by 0");
  if (f.m() != declared)
    throw std::invalid_argument("header declares " + std::to_string(declared) + " clauses, found " +
                                std::to_string(f.m()));
  f.validate();
  return f;
}

std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.n << ' ' << f.m() << '\n';
  for (const auto& c : f.clauses) {
    for (const auto& l : c) out << (l.positive ? l.var : -l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

std::vector<bool> parse_assignment(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n)
    throw std::invalid_argument("assignment has " + std::to_string(s.size()) + " values, formula has " +
                                std::to_string(n) + " variables");
  std::vector<bool> a;
  for (char c : s) {
    if (c == 'T' || c == 't' || c == '1') a.push_back(true);
    else if (c == 'F' || c == 'f' || c == '0') a.push_back(false);
    else throw std::invalid_argument(std::string("assignment character '") + c + "' is not T or F");
  }
  return a;
}

std::string format_assignment(const std::vector<bool>& a) {
  std::string s;
  for (bool b : a) s += b ? 'T' : 'F';
  return s;
}

namespace {

using detail::Carver;

// Variable tower. Chamber k sits in row -2k; its floor (row -2k-1) is solid
// except for the two end cells. Every horizontal move in a chamber ends on a
// hole and every landing column is interior, so towers for the same n advance
// one level per <d, l/r> pair in lockstep. Level i has two holes that start
// disjoint subtrees; all other levels merge both choices.
struct VarLayout {
  Cell start, port_t, port_f;
  int lo = 0, hi = 0;  // open-cell x extent
};

int selecting_half_width(int i, int n) { return std::max(i, n - i + 2); }

VarLayout carve_variable(Carver& cv, Cell o, int i, int n) {
  auto at = [&](int x, int y) { cv.open(o.x + x, o.y + y); };
  at(0, 0);
  at(0, -1);
  const int hs = selecting_half_width(i, n);
  for (int k = 1; k <= i; ++k) {
    int h = k < i ? k : hs;
    for (int x = -h; x <= h; ++x) at(x, -2 * k);
    at(-h, -2 * k - 1);
    at(h, -2 * k - 1);
  }
  const int e = n - i;
  VarLayout out;
  out.start = o;
  for (int c : {-hs, hs}) {
    for (int j = 1; j <= e; ++j) {
      for (int x = c - j; x <= c + j; ++x) at(x, -2 * (i + j));
      at(c - j, -2 * (i + j) - 1);
      at(c + j, -2 * (i + j) - 1);
    }
    // Elbow: land under either last hole, slide right onto the port. Both
    // ends have a ceiling, so u after a horizontal move stays inert.
    for (int x = c - e - 1; x <= c + e + 1; ++x) at(x, -2 * n - 2);
    at(c + e + 1, -2 * n - 3);
    Cell port{o.x + c + e + 1, o.y - 2 * n - 2};
    (c < 0 ? out.port_t : out.port_f) = port;
  }
  out.lo = o.x - hs - e - 1;
  out.hi = o.x + hs + e + 1;
  return out;
}

// Clause room. Particles enter from above at columns >= x0+4; l packs them
// against x0, and the next d drops the one at x0 into the elbow below while
// the ones at x0+1 and x0+2 fall through into a sealed waste room. r then
// carries the survivor to the port at x0+8.
struct OrLayout {
  Cell port;
  std::vector<Cell> waste;
  int lo = 0, hi = 0;
};

OrLayout carve_or(Carver& cv, int x0, int y0, const std::vector<int>& inputs) {
  const int right = *std::max_element(inputs.begin(), inputs.end()) + 4;
  cv.row(y0, x0, right);
  for (int x = x0; x <= x0 + 2; ++x) cv.open(x, y0 - 1);
  cv.row(y0 - 2, x0, x0 + 8);
  cv.open(x0 + 1, y0 - 3);
  cv.open(x0 + 2, y0 - 3);
  cv.open(x0 + 8, y0 - 3);
  OrLayout out;
  // No packing of three or fewer particles reaches the entry columns.
  for (int x = x0 - 3; x <= x0 + 6; ++x) {
    cv.open(x, y0 - 4);
    out.waste.push_back({x, y0 - 4});
  }
  out.port = {x0 + 8, y0 - 2};
  out.lo = x0 - 4;
  out.hi = std::max(right, x0 + 8) + 1;
  return out;
}

// Check corridor. The only hole is m-1 cells right of the left end, so a
// particle drops through it only when l packs at least m particles.
Cell carve_and(Carver& cv, int a0, int y0, int m, const std::vector<int>& inputs) {
  const int right = std::max(*std::max_element(inputs.begin(), inputs.end()) + m + 1, a0 + 3 * m + 1);
  cv.row(y0, a0, right);
  cv.open(a0 + m - 1, y0 - 1);
  cv.open(a0 + m - 1, y0 - 2);
  return {a0 + m - 1, y0 - 2};
}

// Dead-end room below an unused variable port; only its own particle can
// enter, and no packing reaches the entry column.
void carve_trap(Carver& cv, int x, int y, std::vector<Cell>& waste) {
  cv.open(x, y + 1);
  for (int dx = -2; dx <= 2; ++dx) {
    cv.open(x + dx, y);
    waste.push_back({x + dx, y});
  }
}

Cell shifted(Cell c, Cell s) { return {c.x + s.x, c.y + s.y}; }

char var_label(int v) { return static_cast<char>('a' + (v - 1) % 26); }

}  // namespace

Gadget build_variable_gadget(int i, int n, Polarity polarity) {
  if (n < 1 || i < 1 || i > n)
    throw std::invalid_argument("variable index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  Carver cv;
  VarLayout v = carve_variable(cv, {0, 0}, i, n);
  Cell drop_t{v.port_t.x, v.port_t.y - 2}, drop_f{v.port_f.x, v.port_f.y - 2};
  cv.open(drop_t);
  cv.open(drop_f);
  cv.put({"x", var_label(i), Shape::Unit, v.start});
  Gadget g;
  g.name = "variable-" + std::to_string(i) + "-of-" + std::to_string(n);
  Cell s;
  g.workspace = cv.finish(s);
  Cell used = polarity == Polarity::Positive ? v.port_t : v.port_f;
  using D = Port::Direction;
  g.ports = {{"start", shifted(v.start, s), D::Input},   {"T", shifted(v.port_t, s), D::Output},
             {"F", shifted(v.port_f, s), D::Output},     {"T.drop", shifted(drop_t, s), D::Output},
             {"F.drop", shifted(drop_f, s), D::Output}, {"out", shifted(used, s), D::Output}};
  return g;
}

Gadget build_or_gadget() {
  Carver cv;
  std::vector<int> cols{4, 6, 8};
  OrLayout o = carve_or(cv, 0, 0, cols);
  for (int c : cols) cv.col(c, 1, 2);
  cv.open(o.port.x, o.port.y - 2);  // drop shaft below the port
  Gadget g;
  g.name = "or3";
  Cell s;
  g.workspace = cv.finish(s);
  using D = Port::Direction;
  for (int k = 0; k < 3; ++k) g.ports.push_back({"in" + std::to_string(k + 1), shifted({cols[k], 2}, s), D::Input});
  g.ports.push_back({"out", shifted(o.port, s), D::Output});
  g.clock = parse_moves("d,l,d,r");
  for (Cell c : o.waste) g.waste.push_back(shifted(c, s));
  for (int mask = 0; mask < 8; ++mask) {
    TruthRow r;
    for (int k = 0; k < 3; ++k) r.inputs.push_back((mask >> k) & 1);
    r.outputs = {mask != 0};
    g.truth_table.push_back(r);
  }
  return g;
}

Gadget build_and_gadget(int m) {
  if (m < 1) throw std::invalid_argument("and gadget needs at least one input");
  Carver cv;
  std::vector<int> cols;
  for (int j = 0; j < m; ++j) cols.push_back(m + 1 + 2 * j);
  Cell target = carve_and(cv, 0, 0, m, cols);
  for (int c : cols) cv.col(c, 1, 2);
  Gadget g;
  g.name = "and" + std::to_string(m);
  Cell s;
  g.workspace = cv.finish(s);
  using D = Port::Direction;
  for (int k = 0; k < m; ++k) g.ports.push_back({"in" + std::to_string(k + 1), shifted({cols[k], 2}, s), D::Input});
  g.ports.push_back({"target", shifted(target, s), D::Output});
  g.clock = parse_moves("d,l,d,r");
  if (m <= 10) {
    for (int mask = 0; mask < (1 << m); ++mask) {
      TruthRow r;
      for (int k = 0; k < m; ++k) r.inputs.push_back((mask >> k) & 1);
      r.outputs = {mask == (1 << m) - 1};
      g.truth_table.push_back(r);
    }
  }
  return g;
}

SatWorkspace build_3sat_workspace(const CnfFormula& f) {
  f.validate();
  const int n = f.n;
  const int trap_row = -2 * n - 5;
  const int or_row = -2 * n - 8;
  const int and_row = or_row - 8;

  Carver cv;
  SatWorkspace out;
  std::vector<int> or_ports;
  std::vector<int> occurrence(n + 1, 0);
  int cursor = 0;

  for (const auto& clause : f.clauses) {
    // Lay the clause out from local x = 0, then shift it past the previous one.
    struct Placed {
      Literal lit;
      int ox;
    };
    std::vector<Placed> placed;
    int local = 0, lo = INT_MAX, hi = INT_MIN;
    std::vector<int> used;
    for (const auto& lit : clause) {
      const int hs = selecting_half_width(lit.var, n), e = n - lit.var;
      int pt = -hs + e + 1, pf = hs + e + 1;
      int unused = lit.positive ? pf : pt;
      int glo = std::min(-hs - e - 1, unused - 3), ghi = std::max(hs + e + 1, unused + 3);
      int ox = local + 2 - glo;
      placed.push_back({lit, ox});
      used.push_back(ox + (lit.positive ? pt : pf));
      lo = std::min(lo, ox + glo);
      hi = std::max(hi, ox + ghi);
      local = ox + ghi;
    }
    const int x0 = used.front() - 4;
    lo = std::min(lo, x0 - 4);
    hi = std::max(hi, std::max(used.back() + 4, x0 + 8) + 1);
    const int shift = cursor + 2 - lo;

    std::vector<int> inputs;
    for (const auto& p : placed) {
      int ox = p.ox + shift;
      VarLayout v = carve_variable(cv, {ox, 0}, p.lit.var, n);
      Cell use = p.lit.positive ? v.port_t : v.port_f;
      Cell waste = p.lit.positive ? v.port_f : v.port_t;
      cv.col(use.x, use.y - 1, or_row + 1);
      carve_trap(cv, waste.x, trap_row, out.waste);
      cv.col(waste.x, waste.y - 1, trap_row + 1);
      inputs.push_back(use.x);
      int k = occurrence[p.lit.var]++;
      cv.put({"x" + std::to_string(p.lit.var) + "." + std::to_string(k), var_label(p.lit.var), Shape::Unit, v.start});
      ++out.variable_gadgets;
    }
    OrLayout o = carve_or(cv, x0 + shift, or_row, inputs);
    out.waste.insert(out.waste.end(), o.waste.begin(), o.waste.end());
    cv.col(o.port.x, o.port.y - 1, and_row + 1);
    or_ports.push_back(o.port.x);
    ++out.or_gadgets;
    cursor = hi + shift;
  }

  const int m = f.m();
  const int a0 = or_ports.front() - m - 2;
  Cell target = carve_and(cv, a0, and_row, m, or_ports);
  out.and_inputs = m;

  Cell s;
  out.workspace = cv.finish(s);
  out.target = shifted(target, s);
  for (Cell& c : out.waste) c = shifted(c, s);
  out.workspace.add_goal({out.target, std::nullopt});
  return out;
}

MoveSequence variable_phase(const std::vector<bool>& a) {
  MoveSequence s;
  for (bool v : a) {
    s.push_back(Move::Down);
    s.push_back(v ? Move::Left : Move::Right);
  }
  s.push_back(Move::Down);
  s.push_back(Move::Right);
  return s;
}

MoveSequence assignment_to_sequence(const CnfFormula& f, const std::vector<bool>& a) {
  if (static_cast<int>(a.size()) != f.n) throw std::invalid_argument("assignment size mismatch");
  MoveSequence s = variable_phase(a);
  for (int round = 0; round < 2; ++round)
    for (Move m : {Move::Down, Move::Left, Move::Down, Move::Right}) s.push_back(m);
  return s;
}

MoveSequence canonicalize_sequence(const MoveSequence& input) {
  auto horizontal = [](Move m) { return m == Move::Left || m == Move::Right; };
  MoveSequence s = input;
  for (;;) {
    MoveSequence t;
    // Adjacent duplicates.
    for (Move m : s)
      if (t.empty() || t.back() != m) t.push_back(m);
    // u undoes an immediately preceding d and is inert otherwise.
    MoveSequence v;
    for (Move m : t) {
      if (m != Move::Up) v.push_back(m);
      else if (!v.empty() && v.back() == Move::Down) v.pop_back();
    }
    // Leading horizontal moves.
    std::size_t first = 0;
    while (first < v.size() && horizontal(v[first])) ++first;
    v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(first));
    // Within a horizontal run that ends at a vertical move only the last counts.
    MoveSequence w;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (horizontal(v[k]) && k + 1 < v.size() && horizontal(v[k + 1])) {
        std::size_t end = k;
        while (end + 1 < v.size() && horizontal(v[end + 1])) ++end;
        if (end + 1 < v.size()) {
          w.push_back(v[end]);
          k = end;
          continue;
        }
      }
      w.push_back(v[k]);
    }
    if (w == s) return w;
    s = std::move(w);
  }
}

}  // namespace tilt
