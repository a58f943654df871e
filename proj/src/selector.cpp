#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "canvas.hpp"
#include "tilt/permute.hpp"

namespace tilt {

namespace {

Particle matrix_unit(int index, int n, Cell at) {
  return {matrix_particle_id(index, n), static_cast<char>('a' + index % 26), Shape::Unit, at};
}

int ceil_log2(int k) {
  int d = 0;
  while ((1 << d) < k) ++d;
  return d;
}

// Binary decision tree. A node at depth j holds the particle line in row
// y0 - 2j on a floor of n cells; walls w_j away stop the l or r decision and
// the next d drops the line into the chosen child.
struct Tree {
  int n = 0, depth = 0, y0 = 0;
  std::vector<int> w, ext;  // per depth: decision offset and half extent

  void size(int n_, int depth_) {
    n = n_;
    depth = depth_;
    w.assign(depth + 1, 0);
    ext.assign(depth + 1, 0);
    for (int j = depth - 1; j >= 0; --j) {
      w[j] = ext[j + 1] + n;
      ext[j] = w[j] + std::max(1, ext[j + 1]);
    }
  }

  // Returns leaf entries left to right, i.e. in decision-bit order.
  void build(detail::Canvas& cv, int j, int e, std::vector<int>& leaves) const {
    if (j == depth) {
      leaves.push_back(e);
      return;
    }
    int y = y0 - 2 * j;
    for (int x = e; x < e + n; ++x) cv.block(x, y - 1);
    cv.block(e - w[j] - 1, y);
    cv.block(e + w[j] + n, y);
    build(cv, j + 1, e - w[j], leaves);
    build(cv, j + 1, e + w[j], leaves);
  }
};

}  // namespace

SelectorWorkspace build_selector_workspace(const std::vector<Permutation>& perms, const MatrixSpec& spec) {
  if (perms.empty()) throw std::invalid_argument("selector needs at least one permutation");
  if (!spec.valid()) throw std::invalid_argument("invalid matrix spec");
  const int n = spec.n();
  for (const auto& p : perms)
    if (p.size() != n || !p.valid()) throw std::invalid_argument("permutation does not match matrix size");
  const int k = static_cast<int>(perms.size());
  const int depth = ceil_log2(k);
  const int band = std::max(spec.a_c, spec.b_c);

  detail::Canvas cv;
  // Ceiling over the band; the matrix hangs below it in rows [-a_r, 0).
  for (int x = 0; x < band; ++x) cv.block(x, 0);

  Tree tree;
  tree.size(n, depth);
  tree.y0 = -spec.a_r - 2;
  const int c0 = band + 1 + tree.ext[0];

  // r: row R packs against a stop so that line position equals matrix index.
  for (int r = 0; r < spec.a_r; ++r) cv.block(c0 + (r + 1) * spec.a_c, -1 - r);

  std::vector<int> leaves;
  tree.build(cv, 0, c0, leaves);

  // Slots: one row per target cell, column-major from the top, so that every
  // l stop sits below the particles that still have to rise past it.
  const int slot_top = depth > 0 ? tree.y0 - 2 * (depth - 1) - 2 : -spec.a_r - 2;
  auto slot_row = [&](int target) {
    int tr = target / spec.b_c, tc = target % spec.b_c;
    return slot_top - 2 * (tc * spec.b_r + tr);
  };
  for (int t = 0; t < n; ++t) cv.block(t % spec.b_c - 1, slot_row(t));
  for (std::size_t leaf = 0; leaf < leaves.size(); ++leaf) {
    const Permutation& p = perms[std::min<std::size_t>(leaf, k - 1)];
    for (int i = 0; i < n; ++i) cv.block(leaves[leaf] + i, slot_row(p.image[i]) - 1);
  }

  for (int i = 0; i < n; ++i) cv.put(matrix_unit(i, n, matrix_cell({0, -spec.a_r}, spec.a_r, spec.a_c, i)));

  SelectorWorkspace out;
  out.spec = spec;
  out.depth = depth;
  Cell shift;
  out.workspace = cv.finish(shift);
  out.base = {shift.x, shift.y - spec.a_r};
  out.target_base = {shift.x, shift.y - spec.b_r};
  for (int i = 0; i < k; ++i) {
    MoveSequence s{Move::Right, Move::Down};
    for (int b = depth - 1; b >= 0; --b) {
      s.push_back(((i >> b) & 1) ? Move::Right : Move::Left);
      s.push_back(Move::Down);
    }
    s.push_back(Move::Left);
    s.push_back(Move::Up);
    out.sequences.push_back(std::move(s));
  }
  return out;
}

// Both cycles share the matrix lanes: rows [0,a_r) to the right of the matrix
// and columns [0,a_c) above it. The clockwise cycle's drop stops and the
// counter-clockwise cycle's row stops are interleaved along the row lanes, and
// symmetrically the rise stops and left stops along the column lanes, so that
// neither cycle meets the other's obstacles.
TwoPermWorkspace build_two_perm_workspace(const Permutation& cw, const Permutation& ccw, const MatrixSpec& spec) {
  if (!spec.valid() || spec.a_r != spec.b_r || spec.a_c != spec.b_c)
    throw std::invalid_argument("two-permutation workspace needs equal source and target shapes");
  const int n = spec.n(), rows = spec.a_r, cols = spec.a_c;
  for (const auto* p : {&cw, &ccw})
    if (p->size() != n || !p->valid()) throw std::invalid_argument("permutation does not match matrix size");

  auto ty = [&](const Permutation& p, int i) { return rows - 1 - p.image[i] / cols; };
  auto tx = [&](const Permutation& p, int i) { return p.image[i] % cols; };
  auto sy = [&](int i) { return rows - 1 - i / cols; };
  auto sx = [&](int i) { return i % cols; };

  // Horizontal plan: for each target row y, the clockwise drop columns, then a
  // counter-clockwise block of `cols` columns closed by its row stop.
  std::vector<int> drop_col(n), block_start(rows), row_stop(rows);
  int x = cols + 1;
  for (int y = 0; y < rows; ++y) {
    for (int i = 0; i < n; ++i)
      if (ty(cw, i) == y) drop_col[i] = x + 2 * tx(cw, i);
    x += 2 * cols;
    block_start[y] = x;
    row_stop[y] = x + cols;
    x = row_stop[y] + 1;
  }
  // Vertical plan: for each target column c, the counter-clockwise turn rows,
  // then the clockwise stack of column c closed by its rise stop.
  std::vector<int> turn_row(n), stack_base(cols), rise_stop(cols);
  int y = rows + 1;
  for (int c = 0; c < cols; ++c) {
    for (int i = 0; i < n; ++i)
      if (tx(ccw, i) == c) turn_row[i] = y + 2 * ty(ccw, i);
    y += 2 * rows;
    stack_base[c] = y;
    rise_stop[c] = y + rows;
    y = rise_stop[c] + 1;
  }

  detail::Canvas cv;
  for (int c = 0; c < cols; ++c) cv.block(c, rise_stop[c]);
  for (int r = 0; r < rows; ++r) cv.block(row_stop[r], r);
  for (int r = 0; r < rows; ++r) cv.block(-1, r);
  for (int c = 0; c < cols; ++c) cv.block(c, -1);
  for (int i = 0; i < n; ++i) {
    // clockwise: rise, run right to the drop column, drop onto the target row
    int stack_row = stack_base[sx(i)] + sy(i);
    cv.block(drop_col[i] + 1, stack_row);
    cv.block(drop_col[i], ty(cw, i) - 1);
    // counter-clockwise: run right into the block, rise to the turn row, run
    // left onto the target column
    int block_col = block_start[sy(i)] + sx(i);
    cv.block(block_col, turn_row[i] + 1);
    cv.block(tx(ccw, i) - 1, turn_row[i]);
  }
  for (int i = 0; i < n; ++i) cv.put(matrix_unit(i, n, matrix_cell({0, 0}, rows, cols, i)));

  TwoPermWorkspace out;
  out.spec = spec;
  out.workspace = cv.finish(out.base);
  return out;
}

Realization realize_permutation(const Permutation& p, const MatrixSpec& spec, RealizeMode mode) {
  if (!spec.valid() || spec.a_r != spec.b_r || spec.a_c != spec.b_c)
    throw std::invalid_argument("realization needs equal source and target shapes");
  const int n = spec.n();
  Realization out;
  if (mode == RealizeMode::TwoGen) {
    auto ws = build_two_perm_workspace(transposition(n, 0, std::min(1, n - 1)), rotation(n), spec);
    out.workspace = ws.workspace;
    out.base = ws.base;
    out.word = decompose_two_generators(p);
    for (int l : out.word.letters) {
      const MoveSequence& s = l == 0 ? ws.ccw : ws.cw;
      out.moves.insert(out.moves.end(), s.begin(), s.end());
    }
  } else {
    std::vector<Permutation> gens;
    for (int i = 1; i < n; ++i) gens.push_back(transposition(n, 0, i));
    gens.push_back(rotation(n));
    auto sel = build_selector_workspace(gens, spec);
    out.workspace = sel.workspace;
    out.base = sel.base;
    out.word = decompose_n_generators(p);
    for (int l : out.word.letters) {
      const MoveSequence& s = sel.sequences[l == 0 ? n - 1 : l - 1];
      out.moves.insert(out.moves.end(), s.begin(), s.end());
    }
  }
  out.rounds = static_cast<int>(out.word.size());
  return out;
}

}  // namespace tilt
