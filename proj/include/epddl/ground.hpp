#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "epddl/action.hpp"
#include "epddl/state.hpp"
#include "epddl/typecheck.hpp"

namespace epddl {

/// Entity tables of a typed specification.
struct EntityTable {
  const TypeEnv* types = nullptr;
  std::vector<std::string> order;
  std::map<std::string, std::string> type_of;
  std::map<std::string, std::vector<AgentId>> groups;

  /// Entities compatible with the type, in declaration order.
  std::vector<std::string> typed_set(const ast::TypeRef& type) const;
};

struct FactsState {
  std::set<Atom> atoms;
};

struct TaskInfo {
  std::string problem;
  std::string domain;
  std::vector<std::string> libraries;
  std::vector<std::string> requirements;
  int agents_number = 0;
  int atoms_number = 0;
  int facts_number = 0;
  int actions_number = 0;
  int initial_worlds_number = 0;
  int goal_modal_depth = 0;
  int goal_size = 0;
};

struct GroundTask {
  std::vector<Atom> atoms;    // P, sorted by canonical name
  std::vector<AgentId> agents;
  FactsState facts;
  EpistemicState initial;
  std::vector<std::pair<std::string, AbstractAction>> actions;  // grounder order
  FormulaPtr goal;
  TaskInfo info;

  const AbstractAction* find_action(const std::string& name) const;
};

using Binding = std::map<std::string, std::string>;

/// Expansion and translation utilities shared by the type checker and the
/// grounder. World/event/obs-type universes are scoped per construction site.
class GroundContext {
 public:
  GroundContext(const TypedSpec& spec, EntityTable table);

  const EntityTable& entities() const { return table_; }
  const std::set<Atom>& facts_true() const { return facts_true_; }

  std::vector<std::string> typed_set(const ast::TypeRef& type) const;

  /// All typed tuples whose translated condition holds in the facts state.
  std::vector<std::vector<std::string>> induced_power_set(const ast::Params& params,
                                                          const Binding& outer) const;

  /// tau: EPDDL formula to ground formula under a variable binding.
  FormulaPtr translate(const ast::ExprPtr& expr, const Binding& binding) const;

  /// Modal index resolution: single agent stays single, groups/lists/All
  /// expand to agent sets.
  std::vector<AgentId> index_agents(const ast::ModalIndex& index, const Binding& binding,
                                    bool* is_group) const;

  Atom ground_atom(const ast::PredRef& pred, const Binding& binding) const;

  std::string resolve_term(const std::string& term, const Binding& binding) const;

  /// Classical propositional truth over the facts state.
  bool holds_in_facts(const FormulaPtr& phi) const;

  /// listExp: expands combinators, substitutes variables in items via the
  /// callback, deduplicates and keeps first-occurrence order.
  template <typename T, typename Ground, typename Fn>
  std::vector<Ground> expand_list(const ast::ListNode<T>& node, const Binding& binding,
                                  Fn ground_item) const {
    std::vector<Ground> out;
    std::set<Ground> seen;
    expand_list_into<T, Ground, Fn>(node, binding, ground_item, out, seen);
    return out;
  }

  // Scoped universes for the reserved types world/event/obs-type.
  std::vector<std::string> world_scope;
  std::vector<std::string> event_scope;
  std::vector<std::string> obs_type_scope;

 private:
  template <typename T, typename Ground, typename Fn>
  void expand_list_into(const ast::ListNode<T>& node, const Binding& binding, Fn ground_item,
                        std::vector<Ground>& out, std::set<Ground>& seen) const {
    using Node = ast::ListNode<T>;
    switch (node.kind) {
      case Node::Kind::Item: {
        Ground g = ground_item(node.item, binding);
        if (seen.insert(g).second) out.push_back(std::move(g));
        break;
      }
      case Node::Kind::Concat:
        for (const auto& part : node.parts)
          expand_list_into<T, Ground, Fn>(part, binding, ground_item, out, seen);
        break;
      case Node::Kind::Forall:
        for (const auto& tuple : induced_power_set(*node.params, binding)) {
          Binding extended = binding;
          for (std::size_t i = 0; i < node.params->vars.size(); ++i)
            extended[node.params->vars[i].var] = tuple[i];
          expand_list_into<T, Ground, Fn>(*node.body, extended, ground_item, out, seen);
        }
        break;
    }
  }

  const TypedSpec& spec_;
  EntityTable table_;
  std::set<Atom> facts_true_;
};

/// P, Facts and the entity table of the specification.
struct Language {
  std::vector<Atom> atoms;       // sorted canonical names
  std::vector<Atom> fact_atoms;  // sorted, subset of atoms
  std::vector<AgentId> agents;
  EntityTable entities;
};

Language build_language(const TypedSpec& spec);

EpistemicState build_initial_explicit(const TypedSpec& spec, const ast::InitExplicit& init,
                                      GroundContext& ctx);

EpistemicState build_initial_finitary(const TypedSpec& spec, const ast::InitTheory& theory,
                                      GroundContext& ctx);

std::vector<std::pair<std::string, AbstractAction>> ground_actions(const TypedSpec& spec,
                                                                   GroundContext& ctx);

/// Assembles the abstract epistemic planning task.
GroundTask build_task(const TypedSpec& spec);

}  // namespace epddl
