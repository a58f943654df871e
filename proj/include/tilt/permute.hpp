#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt {

// Matrix indices are row-major with row 0 on top.
struct MatrixSpec {
  int a_r = 1, a_c = 1;  // source rows, columns
  int b_r = 1, b_c = 1;  // target rows, columns
  int n() const { return a_r * a_c; }
  bool valid() const { return a_r > 0 && a_c > 0 && b_r > 0 && b_c > 0 && a_r * a_c == b_r * b_c; }
  static MatrixSpec square(int rows, int cols) { return {rows, cols, rows, cols}; }
};

// image[i] is the target index of the element at source index i.
struct Permutation {
  std::vector<int> image;

  int size() const { return static_cast<int>(image.size()); }
  static Permutation identity(int n);
  bool valid() const;
  Permutation inverse() const;
  // Apply *this first, then `next`.
  Permutation then(const Permutation& next) const;
  bool operator==(const Permutation&) const = default;
};

Permutation transposition(int n, int a, int b);
Permutation rotation(int n);  // i -> i+1 mod n
Permutation random_permutation(int n, std::uint64_t seed);
std::string to_json(const Permutation& p);
Permutation permutation_from_json(const std::string& text);

// Least t >= 1 with p^t = identity.
std::uint64_t permutation_order(const Permutation& p);

// Pairs every mismatched source cell of one colour with one of the other
// colour and swaps them. Colours are arbitrary ints; more than two throw.
Permutation make_involution(const std::vector<int>& source, const std::vector<int>& target);

// Cell of matrix index i for a rows x cols block with lower-left corner base.
Cell matrix_cell(Cell base, int rows, int cols, int index);
std::string matrix_particle_id(int index, int n);
void place_matrix(Workspace& w, Cell base, int rows, int cols);
// Ids at each matrix index, "" where the cell is empty.
std::vector<std::string> read_matrix(const Workspace& w, Cell base, int rows, int cols);
// True when the particle that started at source index i sits at target index p[i].
bool realizes(const Workspace& after, Cell base, const MatrixSpec& spec, const Permutation& p);

struct ObstacleTally {
  int rise = 0, stagger = 0, drop = 0, wall = 0;
  int total() const { return rise + stagger + drop + wall; }
};

struct PermutationWorkspace {
  Workspace workspace;
  MoveSequence moves;  // <u, r, d, l>
  Cell base;           // lower-left cell of the matrix
  MatrixSpec spec;
  ObstacleTally tally;
  Cell box_size;       // extent of constructed obstacles plus the matrix
};

PermutationWorkspace build_permutation_workspace(const MatrixSpec& spec, const Permutation& p);

struct SelectorWorkspace {
  Workspace workspace;
  std::vector<MoveSequence> sequences;  // one per stored permutation
  Cell base;         // lower-left cell of the start matrix
  Cell target_base;  // lower-left cell of the result; equals base unless reshaping
  MatrixSpec spec;
  int depth = 0;  // binary decisions per sequence
};

SelectorWorkspace build_selector_workspace(const std::vector<Permutation>& perms, const MatrixSpec& spec);

struct GeneratorWord {
  enum class Mode { TwoGen, NGen };
  Mode mode = Mode::TwoGen;
  int n = 0;
  std::vector<int> letters;  // 0 = q; i >= 1 = p (TwoGen) or p_i (NGen)

  std::string str() const;
  std::size_t size() const { return letters.size(); }
};

Permutation generator(GeneratorWord::Mode mode, int n, int letter);
Permutation evaluate_word(const GeneratorWord& w);
GeneratorWord decompose_two_generators(const Permutation& p);
GeneratorWord decompose_n_generators(const Permutation& p);

struct TwoPermWorkspace {
  Workspace workspace;
  Cell base;
  MatrixSpec spec;
  MoveSequence cw{Move::Up, Move::Right, Move::Down, Move::Left};
  MoveSequence ccw{Move::Right, Move::Up, Move::Left, Move::Down};
};

TwoPermWorkspace build_two_perm_workspace(const Permutation& cw, const Permutation& ccw, const MatrixSpec& spec);

enum class RealizeMode { TwoGen, NGen };

struct Realization {
  Workspace workspace;
  MoveSequence moves;
  Cell base;
  GeneratorWord word;
  int rounds = 0;  // generator applications
};

Realization realize_permutation(const Permutation& p, const MatrixSpec& spec, RealizeMode mode);

}  // namespace tilt
