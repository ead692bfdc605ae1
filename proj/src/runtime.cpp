#include "epddl/runtime.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "epddl/bisim.hpp"
#include "epddl/errors.hpp"

namespace epddl {

Verdict validate_plan(const GroundTask& task, const Plan& plan) {
  Verdict verdict;
  EpistemicState state = task.initial;
  verdict.trace.push_back(canonical_key(state));
  int step = 0;
  for (const auto& name : plan.steps) {
    ++step;
    const AbstractAction* action = task.find_action(name);
    if (!action) throw GroundError("unknown action name '" + name + "'");
    if (!is_applicable(state, *action)) {
      verdict.status = Verdict::Status::InapplicableAt;
      verdict.step = step;
      return verdict;
    }
    state = abstract_product_update(state, *action);
    verdict.trace.push_back(canonical_key(state));
  }
  if (!evaluate(state, task.goal)) {
    verdict.status = Verdict::Status::GoalUnsatisfied;
    return verdict;
  }
  verdict.status = Verdict::Status::Valid;
  return verdict;
}

SolveResult solve_bfs(const GroundTask& task, const SolveOptions& options) {
  if (options.max_depth < 0) throw GroundError("max_depth must be non-negative");
  SolveResult result;

  // Reproducibility: expand actions in sorted-name order.
  std::vector<const std::pair<std::string, AbstractAction>*> actions;
  for (const auto& entry : task.actions) actions.push_back(&entry);
  std::sort(actions.begin(), actions.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  struct Node {
    EpistemicState state;
    int depth;
    std::size_t parent;
    std::string action;
  };
  std::vector<Node> nodes;
  std::map<std::string, std::size_t> visited;  // canonical key -> node

  auto reconstruct = [&](std::size_t at) {
    Plan plan;
    while (nodes[at].depth > 0) {
      plan.steps.push_back(nodes[at].action);
      at = nodes[at].parent;
    }
    std::reverse(plan.steps.begin(), plan.steps.end());
    return plan;
  };

  EpistemicState start = contract(task.initial);
  nodes.push_back({start, 0, 0, ""});
  visited[canonical_key(start)] = 0;
  result.visited = 1;
  if (evaluate(start, task.goal)) {
    result.outcome = SolveResult::Outcome::Found;
    result.plan = {};
    return result;
  }

  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::size_t at = frontier.front();
    frontier.pop_front();
    if (nodes[at].depth >= options.max_depth) continue;
    ++result.expanded;
    // The queue is level-ordered, so the first goal hit is a shortest plan.
    for (const auto* entry : actions) {
      const AbstractAction& action = entry->second;
      if (!is_applicable(nodes[at].state, action)) continue;
      EpistemicState next =
          contract(abstract_product_update(nodes[at].state, action, options.world_cap));
      std::string key = canonical_key(next);
      if (visited.count(key)) continue;
      if (visited.size() >= options.max_states) {
        result.outcome = SolveResult::Outcome::BudgetExceeded;
        result.visited = visited.size();
        return result;
      }
      std::size_t id = nodes.size();
      nodes.push_back({std::move(next), nodes[at].depth + 1, at, entry->first});
      visited[std::move(key)] = id;
      if (evaluate(nodes[id].state, task.goal)) {
        result.outcome = SolveResult::Outcome::Found;
        result.plan = reconstruct(id);
        result.visited = visited.size();
        return result;
      }
      frontier.push_back(id);
    }
  }
  result.outcome = SolveResult::Outcome::NoneFound;
  result.visited = visited.size();
  return result;
}

GroundTask conformant_task(const std::vector<EpistemicState>& states,
                           const std::vector<std::pair<std::string, AbstractAction>>& actions,
                           FormulaPtr goal) {
  if (states.empty()) throw GroundError("conformant task needs at least one initial state");
  for (const auto& s : states)
    if (s.agents != states.front().agents)
      throw GroundError("conformant component states must share one agent language");

  GroundTask task;
  task.agents = states.front().agents;
  task.initial = disjoint_union(states);
  task.actions = actions;
  task.goal = std::move(goal);

  std::set<Atom> atoms;
  for (const auto& s : states)
    for (const auto& [w, label] : s.labels) {
      (void)w;
      atoms.insert(label.begin(), label.end());
    }
  task.atoms.assign(atoms.begin(), atoms.end());

  task.info.problem = "conformant";
  task.info.agents_number = static_cast<int>(task.agents.size());
  task.info.atoms_number = static_cast<int>(task.atoms.size());
  task.info.actions_number = static_cast<int>(task.actions.size());
  task.info.initial_worlds_number = static_cast<int>(task.initial.worlds.size());
  task.info.goal_modal_depth = task.goal->modal_depth();
  task.info.goal_size = task.goal->size();
  return task;
}

}  // namespace epddl
