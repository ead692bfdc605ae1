#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epddl/formula.hpp"

namespace epddl {

using WorldId = std::string;
using WorldPair = std::pair<WorldId, WorldId>;
using RelationSet = std::set<WorldPair>;

/// Finite multi-pointed Kripke model. Immutable by convention after
/// construction; every operation below returns fresh values.
struct EpistemicState {
  std::vector<AgentId> agents;                 // language; relations may omit entries (= empty)
  std::vector<WorldId> worlds;                 // non-empty, insertion order is the canonical order
  std::map<AgentId, RelationSet> relations;
  std::map<WorldId, std::set<Atom>> labels;    // defined for every world
  std::set<WorldId> designated;                // non-empty subset of worlds

  bool has_world(const WorldId& w) const;
  bool has_agent(const AgentId& i) const;

  /// Throws ModelError if any structural invariant is violated.
  void validate() const;
};

/// Truth at a single world of the underlying model (designated set ignored).
bool evaluate_at_world(const EpistemicState& model, const WorldId& world, const FormulaPtr& phi);

/// Truth in the multi-pointed state: phi holds at every designated world.
bool evaluate(const EpistemicState& state, const FormulaPtr& phi);

struct AgentFrameFlags {
  bool reflexive = false;
  bool serial = false;
  bool transitive = false;
  bool euclidean = false;
};

enum class FrameClass { S5, KD45, Neither };

struct FrameReport {
  std::map<AgentId, AgentFrameFlags> per_agent;
  FrameClass classification = FrameClass::Neither;
};

FrameReport frame_report(const EpistemicState& model);

const char* frame_class_name(FrameClass c);

/// Tagged disjoint union; input states embed injectively via "<k>#<world>" ids.
EpistemicState disjoint_union(const std::vector<EpistemicState>& states);

struct PointingReport {
  bool global = false;               // single designated world
  std::set<AgentId> local_for;       // agents whose relation keeps the designated set closed
  bool nondeterministic = false;
};

PointingReport analyze_pointing(const EpistemicState& state);

}  // namespace epddl
