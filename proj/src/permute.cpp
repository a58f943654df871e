#include "tilt/permute.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "canvas.hpp"
#include "json.hpp"

namespace tilt {

Permutation Permutation::identity(int n) {
  Permutation p;
  p.image.resize(n);
  std::iota(p.image.begin(), p.image.end(), 0);
  return p;
}

bool Permutation::valid() const {
  std::vector<char> seen(image.size(), 0);
  for (int v : image) {
    if (v < 0 || v >= size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.image.resize(image.size());
  for (int i = 0; i < size(); ++i) r.image[image[i]] = i;
  return r;
}

Permutation Permutation::then(const Permutation& next) const {
  if (next.size() != size()) throw std::invalid_argument("permutation sizes differ");
  Permutation r;
  r.image.resize(image.size());
  for (int i = 0; i < size(); ++i) r.image[i] = next.image[image[i]];
  return r;
}

Permutation transposition(int n, int a, int b) {
  Permutation p = Permutation::identity(n);
  std::swap(p.image[a], p.image[b]);
  return p;
}

Permutation rotation(int n) {
  Permutation p;
  p.image.resize(n);
  for (int i = 0; i < n; ++i) p.image[i] = (i + 1) % n;
  return p;
}

Permutation random_permutation(int n, std::uint64_t seed) {
  Permutation p = Permutation::identity(n);
  std::mt19937_64 rng(seed);
  std::shuffle(p.image.begin(), p.image.end(), rng);
  return p;
}

std::string to_json(const Permutation& p) { return nlohmann::json(p.image).dump(); }

Permutation permutation_from_json(const std::string& text) {
  Permutation p;
  p.image = nlohmann::json::parse(text).get<std::vector<int>>();
  if (!p.valid()) throw std::invalid_argument("not a permutation");
  return p;
}

std::uint64_t permutation_order(const Permutation& p) {
  std::vector<char> seen(p.image.size(), 0);
  std::uint64_t order = 1;
  for (int i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (int j = i; !seen[j]; j = p.image[j]) {
      seen[j] = 1;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

Permutation make_involution(const std::vector<int>& source, const std::vector<int>& target) {
  if (source.size() != target.size()) throw std::invalid_argument("matrices differ in size");
  std::vector<int> colours;
  for (int c : source)
    if (std::find(colours.begin(), colours.end(), c) == colours.end()) colours.push_back(c);
  for (int c : target)
    if (std::find(colours.begin(), colours.end(), c) == colours.end()) colours.push_back(c);
  if (colours.size() > 2) throw std::invalid_argument("involution needs at most two colours");
  std::vector<int> a_to_b, b_to_a;  // mismatched cells by source colour
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == target[i]) continue;
    (source[i] == colours[0] ? a_to_b : b_to_a).push_back(static_cast<int>(i));
  }
  if (a_to_b.size() != b_to_a.size()) throw std::invalid_argument("colour counts differ");
  Permutation p = Permutation::identity(static_cast<int>(source.size()));
  for (std::size_t k = 0; k < a_to_b.size(); ++k) std::swap(p.image[a_to_b[k]], p.image[b_to_a[k]]);
  return p;
}

Cell matrix_cell(Cell base, int rows, int cols, int index) {
  return {base.x + index % cols, base.y + rows - 1 - index / cols};
}

std::string matrix_particle_id(int index, int n) {
  std::string digits = std::to_string(std::max(n - 1, 0));
  std::string s = std::to_string(index);
  return "m" + std::string(digits.size() - s.size(), '0') + s;
}

namespace {

char matrix_label(int index) {
  static const char* glyphs = "abcdefghijklmnopqrstuvwxyz";
  return glyphs[index % 26];
}

Particle matrix_particle(int index, int n, Cell at) {
  return {matrix_particle_id(index, n), matrix_label(index), Shape::Unit, at};
}

}  // namespace

void place_matrix(Workspace& w, Cell base, int rows, int cols) {
  for (int i = 0; i < rows * cols; ++i) w.add_particle(matrix_particle(i, rows * cols, matrix_cell(base, rows, cols, i)));
}

std::vector<std::string> read_matrix(const Workspace& w, Cell base, int rows, int cols) {
  std::vector<std::string> ids(rows * cols);
  for (int i = 0; i < rows * cols; ++i)
    if (const Particle* p = w.particle_at(matrix_cell(base, rows, cols, i))) ids[i] = p->id;
  return ids;
}

bool realizes(const Workspace& after, Cell base, const MatrixSpec& spec, const Permutation& p) {
  auto ids = read_matrix(after, base, spec.b_r, spec.b_c);
  for (int i = 0; i < p.size(); ++i)
    if (ids[p.image[i]] != matrix_particle_id(i, spec.n())) return false;
  return true;
}

PermutationWorkspace build_permutation_workspace(const MatrixSpec& spec, const Permutation& p) {
  if (!spec.valid()) throw std::invalid_argument("invalid matrix spec");
  const int n = spec.n();
  if (p.size() != n || !p.valid()) throw std::invalid_argument("permutation does not match matrix size");
  const int H = std::max(spec.a_r, spec.b_r);
  const int X0 = std::max(spec.a_c, spec.b_c);

  detail::Canvas cv;
  PermutationWorkspace out;
  out.spec = spec;

  // Rise: column c stacks into rows [H + c*a_r, H + (c+1)*a_r).
  for (int c = 0; c < spec.a_c; ++c) cv.block(c, H + (c + 1) * spec.a_r);
  out.tally.rise = spec.a_c;

  // Rank particles bottom target row first, then by target column, so that
  // drop stops of higher rows lie to the right of every lower-row particle.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto target_y = [&](int i) { return spec.b_r - 1 - p.image[i] / spec.b_c; };
  auto target_x = [&](int i) { return p.image[i] % spec.b_c; };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(target_y(a), target_x(a)) < std::pair(target_y(b), target_x(b));
  });
  for (int rank = 0; rank < n; ++rank) {
    int i = order[rank];
    int c = i % spec.a_c;
    int y = spec.a_r - 1 - i / spec.a_c;
    int row = H + c * spec.a_r + y;
    int x = X0 + 2 * rank;
    cv.block(x + 1, row);
    cv.block(x, target_y(i) - 1);
  }
  out.tally.stagger = n;
  out.tally.drop = n;
  for (int y = 0; y < spec.b_r; ++y) cv.block(-1, y);
  out.tally.wall = spec.b_r;

  for (int i = 0; i < n; ++i) cv.put(matrix_particle(i, n, matrix_cell({0, 0}, spec.a_r, spec.a_c, i)));
  auto [lo, hi] = cv.bounds();
  out.box_size = {hi.x - lo.x + 1, hi.y - lo.y + 1};
  out.workspace = cv.finish(out.base);
  out.moves = {Move::Up, Move::Right, Move::Down, Move::Left};
  return out;
}

// ---------------------------------------------------------------------------
// Generator words

Permutation generator(GeneratorWord::Mode mode, int n, int letter) {
  if (letter == 0) return rotation(n);
  if (mode == GeneratorWord::Mode::TwoGen) return transposition(n, 0, 1);
  return transposition(n, 0, letter);
}

Permutation evaluate_word(const GeneratorWord& w) {
  Permutation r = Permutation::identity(w.n);
  for (int l : w.letters) r = r.then(generator(w.mode, w.n, l));
  return r;
}

std::string GeneratorWord::str() const {
  std::string s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) s += ' ';
    if (letters[i] == 0) s += 'q';
    else if (mode == Mode::TwoGen) s += 'p';
    else s += "p" + std::to_string(letters[i]);
  }
  return s;
}

namespace {

using Code = std::uint64_t;

Code encode(const std::vector<int>& v) {
  Code c = 0;
  for (std::size_t i = 0; i < v.size(); ++i) c |= static_cast<Code>(v[i]) << (4 * i);
  return c;
}

// Breadth-first tree of the Cayley graph from the identity. Each entry holds
// the parent code and the letter that extends the parent's word.
struct CayleyTree {
  std::unordered_map<Code, std::pair<Code, int>> parent;
};

constexpr int kMaxBfsN = 9;

const CayleyTree& cayley_tree(GeneratorWord::Mode mode, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, CayleyTree> cache;
  std::lock_guard lock(mu);
  auto key = std::pair(static_cast<int>(mode), n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  CayleyTree& t = cache[key];
  std::vector<int> letters;
  if (n > 1) {
    letters.push_back(0);
    if (mode == GeneratorWord::Mode::TwoGen) letters.push_back(1);
    else
      for (int i = 1; i < n; ++i) letters.push_back(i);
  }
  std::vector<Permutation> gens;
  for (int l : letters) gens.push_back(generator(mode, n, l));
  Permutation id = Permutation::identity(n);
  Code root = encode(id.image);
  t.parent[root] = {root, -1};
  std::vector<std::vector<int>> frontier{id.image};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& cur : frontier) {
      Code cc = encode(cur);
      for (std::size_t g = 0; g < gens.size(); ++g) {
        std::vector<int> nx(n);
        for (int i = 0; i < n; ++i) nx[i] = gens[g].image[cur[i]];
        Code nc = encode(nx);
        if (t.parent.emplace(nc, std::pair(cc, letters[g])).second) next.push_back(std::move(nx));
      }
    }
    frontier = std::move(next);
  }
  return t;
}

GeneratorWord shortest_word(GeneratorWord::Mode mode, const Permutation& p) {
  const CayleyTree& t = cayley_tree(mode, p.size());
  GeneratorWord w{mode, p.size(), {}};
  Code c = encode(p.image);
  for (;;) {
    auto [par, letter] = t.parent.at(c);
    if (letter < 0) break;
    w.letters.push_back(letter);
    c = par;
  }
  std::reverse(w.letters.begin(), w.letters.end());
  return w;
}

}  // namespace

namespace {

// Relative to the ring, q slides the window (0,1) one step left and p q
// carries the element at position 1 one step left with it. Every element gets
// a planned net displacement (right by delta, or left by n - delta for the k
// elements with the largest delta). Lifting the ring to the integers turns the
// plan into a target coordinate per element, and carrying is a bubble sort on
// those targets: swap when the held element's target lies left of its
// neighbour's. Any plan sorts the ring; the plan only changes the cost.
GeneratorWord lifted_bubble(const Permutation& p, int rho, int k) {
  const int n = p.size();
  std::vector<int> ring(p.image);  // ring[j] = target index; window at w, w+1
  std::vector<int> delta(n), rem(n);
  for (int i = 0; i < n; ++i) delta[i] = ((ring[i] + rho) % n - i + n) % n;
  std::vector<int> by_delta(n);
  std::iota(by_delta.begin(), by_delta.end(), 0);
  std::stable_sort(by_delta.begin(), by_delta.end(),
                   [&](int a, int b) { return delta[a] > delta[b]; });
  for (int i = 0; i < n; ++i) rem[ring[i]] = delta[i];
  for (int j = 0; j < k; ++j) rem[ring[by_delta[j]]] -= n;

  auto good = [&](int j) { return ring[(j + 1) % n] == (ring[j] + 1) % n; };
  int bad = 0;
  for (int j = 0; j < n; ++j) bad += !good(j);

  GeneratorWord w{GeneratorWord::Mode::TwoGen, n, {}};
  int win = 0, idle = 0;
  while (bad > 0 && idle < n) {
    int& y = ring[win];
    int& h = ring[(win + 1) % n];
    if (rem[h] <= rem[y] - 2) {
      for (int j : {win - 1, win, win + 1}) bad -= !good((j + n) % n);
      std::swap(y, h);
      for (int j : {win - 1, win, win + 1}) bad += !good((j + n) % n);
      ++rem[ring[win]];
      --rem[ring[(win + 1) % n]];
      w.letters.push_back(1);
      idle = 0;
    } else {
      ++idle;
    }
    w.letters.push_back(0);
    win = (win + n - 1) % n;
  }
  if (bad > 0) throw std::logic_error("two-generator sort did not converge");
  // Position of ring index j is j - win; rotate until target 0 sits at 0.
  int z = static_cast<int>(std::find(ring.begin(), ring.end(), 0) - ring.begin());
  for (int r = (win - z + n) % n; r > 0; --r) w.letters.push_back(0);
  return w;
}

}  // namespace

GeneratorWord decompose_two_generators(const Permutation& p) {
  if (!p.valid()) throw std::invalid_argument("not a permutation");
  const int n = p.size();
  if (n <= kMaxBfsN) return shortest_word(GeneratorWord::Mode::TwoGen, p);
  std::optional<GeneratorWord> best;
  for (int rho = 0; rho < n; ++rho) {
    long long sum = 0;
    for (int i = 0; i < n; ++i) sum += ((p.image[i] + rho) % n - i + n) % n;
    const int k0 = static_cast<int>(sum / n);
    for (int k = std::max(0, k0 - 2); k <= std::min(n, k0 + 2); ++k) {
      GeneratorWord w = lifted_bubble(p, rho, k);
      if (!best || w.size() < best->size()) best = std::move(w);
    }
  }
  if (evaluate_word(*best).image != p.image) throw std::logic_error("two-generator word does not compose");
  return *best;
}

GeneratorWord decompose_n_generators(const Permutation& p) {
  if (!p.valid()) throw std::invalid_argument("not a permutation");
  const int n = p.size();
  if (n <= kMaxBfsN) return shortest_word(GeneratorWord::Mode::NGen, p);
  // Transpositions through slot 0: a cycle (c1 .. ck) avoiding 0 costs k+1,
  // the cycle through 0 costs its length minus one.
  GeneratorWord w{GeneratorWord::Mode::NGen, n, {}};
  std::vector<int> at(n);  // element currently at each position, by target index
  for (int i = 0; i < n; ++i) at[i] = p.image[i];
  auto swap0 = [&](int i) {
    std::swap(at[0], at[i]);
    w.letters.push_back(i);
  };
  for (;;) {
    while (at[0] != 0) swap0(at[0]);
    int bad = -1;
    for (int i = 1; i < n && bad < 0; ++i)
      if (at[i] != i) bad = i;
    if (bad < 0) break;
    swap0(bad);
  }
  return w;
}

}  // namespace tilt
