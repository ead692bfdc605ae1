#pragma once

#include <string>
#include <vector>

#include "epddl/ground.hpp"

namespace epddl {

struct Plan {
  std::vector<std::string> steps;  // ground action names
};

struct Verdict {
  enum class Status { Valid, InapplicableAt, GoalUnsatisfied };
  Status status = Status::Valid;
  int step = 0;                     // 1-based failing step for InapplicableAt
  std::vector<std::string> trace;   // canonical state keys; |plan|+1 entries when valid

  bool valid() const { return status == Status::Valid; }
};

struct SolveOptions {
  int max_depth = 6;
  std::size_t max_states = 50000;
  std::size_t world_cap = 10000;
};

struct SolveResult {
  enum class Outcome { Found, NoneFound, BudgetExceeded };
  Outcome outcome = Outcome::NoneFound;
  Plan plan;
  std::size_t visited = 0;
  std::size_t expanded = 0;
};

/// Applies the plan left to right with abstract product updates; valid iff
/// every step is applicable and the final state satisfies the goal.
Verdict validate_plan(const GroundTask& task, const Plan& plan);

/// Breadth-first search over abstract product updates, deduplicated by
/// canonical state keys, actions expanded in sorted-name order. Returns a
/// shortest plan; "none found" means the space within max_depth is exhausted.
SolveResult solve_bfs(const GroundTask& task, const SolveOptions& options = {});

/// Conformant reduction: one task whose initial state is the disjoint union
/// of the given states. Every state must share the task's agent language.
GroundTask conformant_task(const std::vector<EpistemicState>& states,
                           const std::vector<std::pair<std::string, AbstractAction>>& actions,
                           FormulaPtr goal);

}  // namespace epddl
