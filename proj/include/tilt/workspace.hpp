#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tilt {

// Grid coordinates: origin bottom-left, x grows right, y grows up.
struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Move : std::uint8_t { Up, Down, Left, Right };

using MoveSequence = std::vector<Move>;

inline constexpr Move kAllMoves[4] = {Move::Up, Move::Down, Move::Left, Move::Right};

// The universal gate clock <d, l, u, r>.
inline const MoveSequence kClock = {Move::Down, Move::Left, Move::Up, Move::Right};

char move_token(Move m);
std::optional<Move> parse_move_token(std::string_view token);

// Accepts "r,d,l", "r d l", "rdl" and the glyph "ℓ" for left.
MoveSequence parse_moves(std::string_view text);
std::string format_moves(const MoveSequence& moves, char sep = ',');

Cell step(Cell c, Move m, int distance = 1);

enum class Shape : std::uint8_t { Unit, HDomino, VDomino };

const char* shape_name(Shape s);  // "1x1", "2x1h", "2x1v"
std::optional<Shape> parse_shape(std::string_view name);

struct Particle {
  std::string id;
  char label = '?';
  Shape shape = Shape::Unit;
  Cell anchor;  // lower/left cell for dominoes

  int size() const { return shape == Shape::Unit ? 1 : 2; }
  Cell cell(int i) const;
  bool covers(Cell c) const;
  bool operator==(const Particle&) const = default;
};

// A goal names one cell; `who` empty means any particle will do. A domino
// counts as on the goal when either of its cells matches.
struct Goal {
  Cell cell;
  std::optional<std::string> who;
  bool operator==(const Goal&) const = default;
};

class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string id;
  Shape shape;
  Cell anchor;
  bool operator==(const ConfigEntry&) const = default;
};

struct Configuration {
  std::vector<ConfigEntry> entries;  // sorted by id
  std::string key() const;           // byte-stable encoding
  bool operator==(const Configuration&) const = default;
};

class Workspace {
 public:
  Workspace() = default;
  // New workspace with the boundary ring already set to obstacle.
  Workspace(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool is_obstacle(Cell c) const { return !in_bounds(c) || grid_[index(c)] != 0; }
  void set_obstacle(Cell c, bool blocked = true);
  std::vector<Cell> obstacles() const;  // ordered by (y, x)
  std::size_t obstacle_count() const;
  std::size_t interior_obstacle_count() const;  // excludes the boundary ring

  const std::vector<Particle>& particles() const { return particles_; }
  void add_particle(Particle p);  // keeps particles sorted by id
  void clear_particles() { particles_.clear(); }
  const Particle* find(std::string_view id) const;
  const Particle* particle_at(Cell c) const;
  void set_anchor(std::size_t index, Cell anchor) { particles_[index].anchor = anchor; }

  const std::vector<Goal>& goals() const { return goals_; }
  void add_goal(Goal g);  // keeps goals ordered by (y, x)
  void clear_goals() { goals_.clear(); }
  bool goals_satisfied() const;

  // Throws WorkspaceError naming the offending cell.
  void validate() const;

  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }

  bool operator==(const Workspace&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> grid_;
  std::vector<Particle> particles_;
  std::vector<Goal> goals_;
};

Workspace apply_move(const Workspace& w, Move m);
Workspace apply_sequence(const Workspace& w, const MoveSequence& moves);
Configuration canonical_config(const Workspace& w);

// Reusable slide engine over a fixed obstacle grid and particle shape list.
// Positions are anchors indexed like the particles of the source workspace.
// Not thread-safe: each thread needs its own Slider.
class Slider {
 public:
  explicit Slider(const Workspace& w);
  void apply(std::vector<Cell>& anchors, Move m) const;
  std::vector<Cell> anchors_of(const Workspace& w) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> blocked_;
  std::vector<Shape> shapes_;
  mutable std::vector<std::int32_t> occ_;
  mutable std::vector<std::pair<int, int>> order_;
};

}  // namespace tilt
