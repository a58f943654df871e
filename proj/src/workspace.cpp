#include "tilt/workspace.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace tilt {

char move_token(Move m) {
  switch (m) {
    case Move::Up: return 'u';
    case Move::Down: return 'd';
    case Move::Left: return 'l';
    case Move::Right: return 'r';
  }
  return '?';
}

std::optional<Move> parse_move_token(std::string_view t) {
  if (t == "u" || t == "U") return Move::Up;
  if (t == "d" || t == "D") return Move::Down;
  if (t == "l" || t == "L" || t == "\xE2\x84\x93") return Move::Left;
  if (t == "r" || t == "R") return Move::Right;
  return std::nullopt;
}

MoveSequence parse_moves(std::string_view text) {
  MoveSequence out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t len = (c == 0xE2) ? 3 : 1;
    auto m = parse_move_token(text.substr(i, len));
    if (!m) throw std::invalid_argument("bad move token at offset " + std::to_string(i));
    out.push_back(*m);
    i += len;
  }
  return out;
}

std::string format_moves(const MoveSequence& moves, char sep) {
  std::string s;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i && sep) s += sep;
    s += move_token(moves[i]);
  }
  return s;
}

Cell step(Cell c, Move m, int k) {
  switch (m) {
    case Move::Up: return {c.x, c.y + k};
    case Move::Down: return {c.x, c.y - k};
    case Move::Left: return {c.x - k, c.y};
    case Move::Right: return {c.x + k, c.y};
  }
  return c;
}

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::Unit: return "1x1";
    case Shape::HDomino: return "2x1h";
    case Shape::VDomino: return "2x1v";
  }
  return "?";
}

std::optional<Shape> parse_shape(std::string_view n) {
  if (n == "1x1") return Shape::Unit;
  if (n == "2x1h") return Shape::HDomino;
  if (n == "2x1v") return Shape::VDomino;
  return std::nullopt;
}

Cell Particle::cell(int i) const {
  if (i == 0) return anchor;
  return shape == Shape::HDomino ? Cell{anchor.x + 1, anchor.y} : Cell{anchor.x, anchor.y + 1};
}

bool Particle::covers(Cell c) const {
  for (int i = 0; i < size(); ++i)
    if (cell(i) == c) return true;
  return false;
}

namespace {

void put_u16(std::string& s, int v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

std::string Configuration::key() const {
  std::string s;
  for (const auto& e : entries) {
    s += e.id;
    s.push_back('\0');
    s.push_back(static_cast<char>(e.shape));
    put_u16(s, e.anchor.x);
    put_u16(s, e.anchor.y);
  }
  return s;
}

Workspace::Workspace(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw WorkspaceError("workspace dimensions must be positive");
  grid_.assign(static_cast<std::size_t>(width) * height, 0);
  for (int x = 0; x < width; ++x) {
    grid_[index({x, 0})] = 1;
    grid_[index({x, height - 1})] = 1;
  }
  for (int y = 0; y < height; ++y) {
    grid_[index({0, y})] = 1;
    grid_[index({width - 1, y})] = 1;
  }
}

void Workspace::set_obstacle(Cell c, bool blocked) {
  if (!in_bounds(c)) throw WorkspaceError("obstacle outside workspace");
  grid_[index(c)] = blocked ? 1 : 0;
}

std::vector<Cell> Workspace::obstacles() const {
  std::vector<Cell> out;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (grid_[index({x, y})]) out.push_back({x, y});
  return out;
}

std::size_t Workspace::obstacle_count() const {
  return static_cast<std::size_t>(std::count(grid_.begin(), grid_.end(), 1));
}

std::size_t Workspace::interior_obstacle_count() const {
  std::size_t n = 0;
  for (int y = 1; y + 1 < height_; ++y)
    for (int x = 1; x + 1 < width_; ++x)
      if (grid_[index({x, y})]) ++n;
  return n;
}

void Workspace::add_particle(Particle p) {
  auto it = std::lower_bound(particles_.begin(), particles_.end(), p.id,
                             [](const Particle& a, const std::string& id) { return a.id < id; });
  if (it != particles_.end() && it->id == p.id) throw WorkspaceError("duplicate particle id '" + p.id + "'");
  particles_.insert(it, std::move(p));
}

const Particle* Workspace::find(std::string_view id) const {
  auto it = std::lower_bound(particles_.begin(), particles_.end(), id,
                             [](const Particle& a, std::string_view k) { return a.id < k; });
  return (it != particles_.end() && it->id == id) ? &*it : nullptr;
}

const Particle* Workspace::particle_at(Cell c) const {
  for (const auto& p : particles_)
    if (p.covers(c)) return &p;
  return nullptr;
}

void Workspace::add_goal(Goal g) {
  auto key = [](const Goal& a) { return std::pair(a.cell.y, a.cell.x); };
  auto it = std::upper_bound(goals_.begin(), goals_.end(), g,
                             [&](const Goal& a, const Goal& b) { return key(a) < key(b); });
  goals_.insert(it, std::move(g));
}

bool Workspace::goals_satisfied() const {
  for (const auto& g : goals_) {
    if (g.who) {
      const Particle* p = find(*g.who);
      if (!p || !p->covers(g.cell)) return false;
    } else if (!particle_at(g.cell)) {
      return false;
    }
  }
  return true;
}

namespace {

std::string at(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

void Workspace::validate() const {
  for (int x = 0; x < width_; ++x)
    for (int y : {0, height_ - 1})
      if (!grid_[index({x, y})]) throw WorkspaceError("unbounded workspace: boundary cell " + at({x, y}) + " is free");
  for (int y = 0; y < height_; ++y)
    for (int x : {0, width_ - 1})
      if (!grid_[index({x, y})]) throw WorkspaceError("unbounded workspace: boundary cell " + at({x, y}) + " is free");
  std::vector<int> owner(grid_.size(), -1);
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    const Particle& p = particles_[i];
    for (int k = 0; k < p.size(); ++k) {
      Cell c = p.cell(k);
      if (!in_bounds(c)) throw WorkspaceError("particle '" + p.id + "' outside workspace at " + at(c));
      if (grid_[index(c)]) throw WorkspaceError("particle '" + p.id + "' overlaps obstacle at " + at(c));
      if (owner[index(c)] >= 0)
        throw WorkspaceError("overlapping bodies '" + particles_[owner[index(c)]].id + "' and '" + p.id + "' at " + at(c));
      owner[index(c)] = static_cast<int>(i);
    }
  }
  for (const auto& g : goals_) {
    if (!in_bounds(g.cell)) throw WorkspaceError("goal outside workspace at " + at(g.cell));
    if (g.who && !find(*g.who)) throw WorkspaceError("goal names unknown particle '" + *g.who + "'");
  }
}

Slider::Slider(const Workspace& w) : width_(w.width()), height_(w.height()) {
  blocked_.resize(static_cast<std::size_t>(width_) * height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) blocked_[w.index({x, y})] = w.is_obstacle({x, y}) ? 1 : 0;
  for (const auto& p : w.particles()) shapes_.push_back(p.shape);
  occ_.assign(blocked_.size(), -1);
}

std::vector<Cell> Slider::anchors_of(const Workspace& w) const {
  std::vector<Cell> a;
  a.reserve(w.particles().size());
  for (const auto& p : w.particles()) a.push_back(p.anchor);
  return a;
}

void Slider::apply(std::vector<Cell>& anchors, Move m) const {
  const int n = static_cast<int>(anchors.size());
  auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y) * width_ + c.x; };
  auto second = [&](int i) {
    Cell a = anchors[i];
    return shapes_[i] == Shape::HDomino ? Cell{a.x + 1, a.y} : Cell{a.x, a.y + 1};
  };
  for (int i = 0; i < n; ++i) {
    occ_[idx(anchors[i])] = i;
    if (shapes_[i] != Shape::Unit) occ_[idx(second(i))] = i;
  }
  // Leading coordinate along the move; particles further ahead settle first.
  order_.clear();
  for (int i = 0; i < n; ++i) {
    Cell far = shapes_[i] == Shape::Unit ? anchors[i] : second(i);
    int lead = 0;
    switch (m) {
      case Move::Up: lead = far.y; break;
      case Move::Right: lead = far.x; break;
      case Move::Down: lead = -anchors[i].y; break;
      case Move::Left: lead = -anchors[i].x; break;
    }
    order_.push_back({-lead, i});
  }
  std::sort(order_.begin(), order_.end());
  for (auto [neg, i] : order_) {
    (void)neg;
    const bool two = shapes_[i] != Shape::Unit;
    Cell a = anchors[i];
    Cell b = two ? second(i) : a;
    occ_[idx(a)] = -1;
    occ_[idx(b)] = -1;
    for (;;) {
      Cell na = step(a, m), nb = step(b, m);
      if (blocked_[idx(na)] || occ_[idx(na)] >= 0) break;
      if (two && (blocked_[idx(nb)] || occ_[idx(nb)] >= 0)) break;
      a = na;
      b = nb;
    }
    anchors[i] = a;
    occ_[idx(a)] = i;
    occ_[idx(b)] = i;
  }
  for (int i = 0; i < n; ++i) {
    occ_[idx(anchors[i])] = -1;
    if (shapes_[i] != Shape::Unit) occ_[idx(second(i))] = -1;
  }
}

Workspace apply_move(const Workspace& w, Move m) { return apply_sequence(w, {m}); }

Workspace apply_sequence(const Workspace& w, const MoveSequence& moves) {
  if (moves.empty() || w.particles().empty()) return w;
  Slider s(w);
  auto anchors = s.anchors_of(w);
  for (Move m : moves) s.apply(anchors, m);
  Workspace out = w;
  for (std::size_t i = 0; i < anchors.size(); ++i) out.set_anchor(i, anchors[i]);
  return out;
}

Configuration canonical_config(const Workspace& w) {
  Configuration c;
  for (const auto& p : w.particles()) c.entries.push_back({p.id, p.shape, p.anchor});
  std::sort(c.entries.begin(), c.entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return c;
}

}  // namespace tilt
