#include "route.hpp"

#include <algorithm>
#include <queue>

namespace tilt::detail {

namespace {

int lstop(const Wire& w) { return std::min(w.from, w.to) - 1; }

// Columns that must stay closed somewhere in the wire's own rows.
std::vector<int> closed_columns(const Wire& w) {
  int ls = lstop(w);
  std::vector<int> c = {w.from, ls - 1, ls, w.to + 1};
  if (w.sink) c.push_back(w.to);
  return c;
}

bool hits(const std::vector<int>& cols, int x) { return std::find(cols.begin(), cols.end(), x) != cols.end(); }

// Can wire a sit anywhere above wire b? b's source column crosses a's rows
// and a's through column crosses b's rows.
bool may_sit_above(const Wire& a, const Wire& b) {
  if (hits(closed_columns(a), b.from)) return false;
  if (!a.sink && hits(closed_columns(b), a.to)) return false;
  return true;
}

}  // namespace

bool shift_routable(const Wire& w) {
  int d = w.to - w.from;
  if (w.sink) return d >= 1;
  return d != 0 && d != -1;
}

std::optional<RoutePlan> plan_route(const std::vector<Wire>& wires) {
  std::size_t n = wires.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!shift_routable(wires[i])) return std::nullopt;
    for (std::size_t j = i + 1; j < n; ++j)
      if (wires[i].from == wires[j].from || wires[i].to == wires[j].to) return std::nullopt;
  }
  std::vector<std::vector<std::size_t>> after(n);
  std::vector<int> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool ij = may_sit_above(wires[i], wires[j]);
      bool ji = may_sit_above(wires[j], wires[i]);
      if (!ij && !ji) return std::nullopt;
      if (ij && !ji) {
        after[i].push_back(j);
        ++indeg[j];
      } else if (ji && !ij) {
        after[j].push_back(i);
        ++indeg[i];
      }
    }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  RoutePlan plan;
  plan.rank.assign(n, -1);
  int next = 0;
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    plan.rank[i] = next++;
    for (std::size_t j : after[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (next != static_cast<int>(n)) return std::nullopt;
  plan.height = route_height(n);
  return plan;
}

void carve_route(Carver& cv, const std::vector<Wire>& wires, const RoutePlan& plan, int top, int exit_row) {
  for (std::size_t k = 0; k < wires.size(); ++k) {
    const Wire& w = wires[k];
    int g = top - 3 * plan.rank[k];
    int f = g - 1;
    int ls = lstop(w);
    cv.col(w.from, top + 1, f);
    cv.row(f, ls, w.from);
    cv.col(ls, f, g);
    cv.row(g, ls, w.to);
    if (!w.sink) cv.col(w.to, g, exit_row);
  }
}

Cell route_end(const std::vector<Wire>& wires, const RoutePlan& plan, std::size_t k, int top) {
  return {wires[k].to, top - 3 * plan.rank[k]};
}

std::pair<int, int> route_span(const std::vector<Wire>& wires) {
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& w : wires) {
    int a = lstop(w) - 1;
    int b = std::max(w.from, w.to + 1);
    if (first || a < lo) lo = a;
    if (first || b > hi) hi = b;
    first = false;
  }
  return {lo, hi};
}

}  // namespace tilt::detail
