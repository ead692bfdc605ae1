#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "epddl/state.hpp"

namespace epddl {

using EventId = std::string;
using ObsTypeId = std::string;
using EventPair = std::pair<EventId, EventId>;
using EventRelationSet = std::set<EventPair>;

/// One ground conditional-effect clause for an atom. The postcondition formula
/// of the clause is: Always -> T/F; When -> p|cond / p&!cond; Iff -> cond/!cond.
struct EffectClause {
  enum class Kind { Always, When, Iff };
  Kind kind = Kind::Always;
  bool positive = true;
  FormulaPtr condition;  // null for Always

  FormulaPtr postcondition(const Atom& atom) const;
  /// Value this clause assigns at a world where `condition_true` holds;
  /// -1 no assignment, 0 assigns false, 1 assigns true.
  int assignment(bool condition_true) const;
};

/// Per-event precondition and sparse postconditions. Atoms absent from `post`
/// keep their value. `post_clauses`, when present, carries the grounder's
/// conditional-effect structure used for the per-world consistency check.
struct EventData {
  FormulaPtr pre;                                       // never null
  std::map<Atom, FormulaPtr> post;                      // sparse
  std::map<Atom, std::vector<EffectClause>> post_clauses;
};

struct EventModel {
  std::vector<EventId> events;                 // non-empty
  std::map<AgentId, EventRelationSet> relations;
  std::map<EventId, EventData> data;           // pre defined for every event
};

struct EpistemicAction {
  std::string name;
  EventModel model;
  std::set<EventId> designated;  // non-empty subset of events
};

/// Abstract event model: edges labelled by observability types, plus per-agent
/// observability functions selecting the type per state.
struct AbstractAction {
  std::string name;
  std::string type_name;
  std::vector<EventId> events;
  std::vector<ObsTypeId> obs_types;
  std::map<ObsTypeId, EventRelationSet> typed_relations;  // missing type = empty
  std::map<EventId, EventData> data;
  std::map<AgentId, std::map<ObsTypeId, FormulaPtr>> obs;  // missing entry = false
  std::set<EventId> designated;
};

bool is_applicable(const EpistemicState& s, const EpistemicAction& a);
bool is_applicable(const EpistemicState& s, const AbstractAction& a);

/// Standard product update; worlds of the result are named "(w|e)".
EpistemicState product_update(const EpistemicState& s, const EpistemicAction& a,
                              std::size_t world_cap = 0);

/// The unique observability type t with s |= obs_i(t). Throws
/// MalformedObservabilityError when zero or several conditions hold.
ObsTypeId observability_type_of(const AbstractAction& a, const EpistemicState& s,
                                const AgentId& agent);

EpistemicState abstract_product_update(const EpistemicState& s, const AbstractAction& a,
                                       std::size_t world_cap = 0);

/// Epistemic action induced from `a` by `s`: Q'_i = Q_{type(i)}.
EpistemicAction induce(const AbstractAction& a, const EpistemicState& s);

/// Abstraction of a standard action: observability types are the classes of
/// agents with equal relations, with constant-true/false obs conditions.
AbstractAction abstract_action(const EpistemicAction& x, const std::vector<AgentId>& agents);

bool operator==(const EventData& a, const EventData& b);
bool operator==(const EpistemicAction& a, const EpistemicAction& b);
bool operator==(const AbstractAction& a, const AbstractAction& b);
bool states_equal(const EpistemicState& a, const EpistemicState& b);

}  // namespace epddl
