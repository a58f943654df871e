#include "tilt/solver.hpp"

#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace tilt {

GoalSpec GoalSpec::from_workspace(const Workspace& w) {
  GoalSpec g;
  g.goals = w.goals();
  return g;
}

GoalSpec GoalSpec::any_at(Cell c) {
  GoalSpec g;
  g.goals.push_back({c, std::nullopt});
  return g;
}

GoalSpec GoalSpec::exact(const Configuration& c) {
  GoalSpec g;
  g.kind = Kind::Configuration;
  g.target = c;
  return g;
}

const char* status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Unsolvable: return "unsolvable";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

std::string pack(const std::vector<Cell>& a) {
  std::string s(a.size() * 4, '\0');
  for (std::size_t i = 0; i < a.size(); ++i) {
    s[4 * i] = static_cast<char>(a[i].x & 0xff);
    s[4 * i + 1] = static_cast<char>((a[i].x >> 8) & 0xff);
    s[4 * i + 2] = static_cast<char>(a[i].y & 0xff);
    s[4 * i + 3] = static_cast<char>((a[i].y >> 8) & 0xff);
  }
  return s;
}

std::vector<Cell> unpack(const std::string& s) {
  std::vector<Cell> a(s.size() / 4);
  auto u = [&](std::size_t i) { return static_cast<int>(static_cast<unsigned char>(s[i])); };
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = {u(4 * i) | (u(4 * i + 1) << 8), u(4 * i + 2) | (u(4 * i + 3) << 8)};
  return a;
}

// Goal test over anchor vectors, resolved once against particle indices.
class GoalTest {
 public:
  GoalTest(const Workspace& w, const GoalSpec& g) : shapes_() {
    for (const auto& p : w.particles()) shapes_.push_back(p.shape);
    if (g.kind == GoalSpec::Kind::Configuration) {
      exact_ = true;
      for (const auto& p : w.particles()) {
        const ConfigEntry* e = nullptr;
        for (const auto& t : g.target.entries)
          if (t.id == p.id) e = &t;
        if (!e) throw std::invalid_argument("target configuration misses particle '" + p.id + "'");
        target_.push_back(e->anchor);
      }
      return;
    }
    for (const auto& goal : g.goals) {
      int who = -1;
      if (goal.who) {
        for (std::size_t i = 0; i < w.particles().size(); ++i)
          if (w.particles()[i].id == *goal.who) who = static_cast<int>(i);
        if (who < 0) throw std::invalid_argument("goal names unknown particle '" + *goal.who + "'");
      }
      cells_.push_back({goal.cell, who});
    }
  }

  bool operator()(const std::vector<Cell>& a) const {
    if (exact_) return a == target_;
    for (auto [c, who] : cells_) {
      if (who >= 0) {
        if (!covers(who, a[who], c)) return false;
      } else {
        bool any = false;
        for (std::size_t i = 0; i < a.size() && !any; ++i) any = covers(static_cast<int>(i), a[i], c);
        if (!any) return false;
      }
    }
    return true;
  }

 private:
  bool covers(int i, Cell a, Cell c) const {
    if (a == c) return true;
    if (shapes_[i] == Shape::HDomino) return Cell{a.x + 1, a.y} == c;
    if (shapes_[i] == Shape::VDomino) return Cell{a.x, a.y + 1} == c;
    return false;
  }
  std::vector<Shape> shapes_;
  bool exact_ = false;
  std::vector<Cell> target_;
  std::vector<std::pair<Cell, int>> cells_;
};

constexpr std::uint8_t kNoMove = 4;

}  // namespace

bool goal_met(const Workspace& w, const GoalSpec& goal) {
  Slider s(w);
  return GoalTest(w, goal)(s.anchors_of(w));
}

SearchResult bfs_shortest_sequence(const Workspace& w, const GoalSpec& goal, std::size_t cap) {
  SearchResult res;
  Slider slider(w);
  GoalTest test(w, goal);
  auto start = slider.anchors_of(w);
  if (test(start)) {
    res.status = SearchStatus::Solved;
    res.explored = 1;
    return res;
  }
  struct Node {
    std::uint32_t parent;
    std::uint8_t move;
  };
  std::vector<Node> nodes{{0, kNoMove}};
  std::vector<std::string> keys{pack(start)};
  std::unordered_map<std::string, std::uint32_t> seen{{keys[0], 0}};
  std::deque<std::uint32_t> frontier{0};
  auto rebuild = [&](std::uint32_t i) {
    MoveSequence seq;
    while (nodes[i].move != kNoMove) {
      seq.push_back(static_cast<Move>(nodes[i].move));
      i = nodes[i].parent;
    }
    return MoveSequence(seq.rbegin(), seq.rend());
  };
  while (!frontier.empty()) {
    res.frontier_peak = std::max(res.frontier_peak, frontier.size());
    std::uint32_t cur = frontier.front();
    frontier.pop_front();
    auto base = unpack(keys[cur]);
    for (Move m : kAllMoves) {
      if (nodes[cur].move == static_cast<std::uint8_t>(m)) continue;
      auto next = base;
      slider.apply(next, m);
      std::string k = pack(next);
      if (seen.count(k)) continue;
      if (seen.size() >= cap) {
        res.status = SearchStatus::BudgetExhausted;
        res.explored = seen.size();
        return res;
      }
      auto id = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back({cur, static_cast<std::uint8_t>(m)});
      seen.emplace(k, id);
      keys.push_back(std::move(k));
      if (test(next)) {
        res.status = SearchStatus::Solved;
        res.sequence = rebuild(id);
        res.explored = seen.size();
        return res;
      }
      frontier.push_back(id);
    }
  }
  res.status = SearchStatus::Unsolvable;
  res.explored = seen.size();
  return res;
}

ReachableSet reachable_configs(const Workspace& w, std::size_t cap) {
  ReachableSet out;
  Slider slider(w);
  std::vector<std::string> keys{pack(slider.anchors_of(w))};
  std::unordered_map<std::string, std::uint32_t> seen{{keys[0], 0}};
  for (std::size_t head = 0; head < keys.size(); ++head) {
    auto base = unpack(keys[head]);
    for (Move m : kAllMoves) {
      auto next = base;
      slider.apply(next, m);
      std::string k = pack(next);
      if (seen.count(k)) continue;
      if (seen.size() >= cap) {
        out.capped = true;
        head = keys.size();
        break;
      }
      seen.emplace(k, static_cast<std::uint32_t>(keys.size()));
      keys.push_back(std::move(k));
    }
  }
  for (const auto& k : keys) {
    auto a = unpack(k);
    Configuration c;
    for (std::size_t i = 0; i < a.size(); ++i) c.entries.push_back({w.particles()[i].id, w.particles()[i].shape, a[i]});
    out.configs.push_back(std::move(c));
  }
  return out;
}

bool is_solvable(const Workspace& w, const GoalSpec& goal, std::size_t cap) {
  auto r = bfs_shortest_sequence(w, goal, cap);
  if (r.status == SearchStatus::BudgetExhausted) throw std::runtime_error("search budget exhausted");
  return r.status == SearchStatus::Solved;
}

}  // namespace tilt
