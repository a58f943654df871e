#pragma once

#include <cstddef>
#include <vector>

#include "tilt/workspace.hpp"

namespace tilt {

struct GoalSpec {
  enum class Kind { Cells, Configuration };
  Kind kind = Kind::Cells;
  std::vector<Goal> goals;     // labeled and/or "any particle" cells
  Configuration target;        // used when kind == Configuration

  static GoalSpec from_workspace(const Workspace& w);
  static GoalSpec any_at(Cell c);
  static GoalSpec exact(const Configuration& c);
};

enum class SearchStatus { Solved, Unsolvable, BudgetExhausted };

const char* status_name(SearchStatus s);

struct SearchResult {
  SearchStatus status = SearchStatus::Unsolvable;
  MoveSequence sequence;
  std::size_t explored = 0;
  std::size_t frontier_peak = 0;
};

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

// Breadth-first over u < d < l < r. The returned sequence is the
// lexicographically first among the shortest ones. Repeating the previous
// direction is never expanded since settled moves are idempotent.
SearchResult bfs_shortest_sequence(const Workspace& w, const GoalSpec& goal,
                                   std::size_t cap = kDefaultStateCap);

struct ReachableSet {
  std::vector<Configuration> configs;  // discovery order, start first
  bool capped = false;
};

ReachableSet reachable_configs(const Workspace& w, std::size_t cap);

// Throws std::runtime_error when the budget runs out.
bool is_solvable(const Workspace& w, const GoalSpec& goal, std::size_t cap = kDefaultStateCap);

bool goal_met(const Workspace& w, const GoalSpec& goal);

}  // namespace tilt
