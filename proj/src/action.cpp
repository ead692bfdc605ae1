#include "epddl/action.hpp"

#include <algorithm>

#include "epddl/errors.hpp"

namespace epddl {

FormulaPtr EffectClause::postcondition(const Atom& atom) const {
  switch (kind) {
    case Kind::Always:
      return positive ? Formula::truth() : Formula::falsity();
    case Kind::When:
      return positive ? Formula::disj({Formula::make_atom(atom), condition})
                      : Formula::conj({Formula::make_atom(atom), Formula::negate(condition)});
    case Kind::Iff:
      return positive ? condition : Formula::negate(condition);
  }
  return Formula::truth();
}

int EffectClause::assignment(bool condition_true) const {
  switch (kind) {
    case Kind::Always:
      return positive ? 1 : 0;
    case Kind::When:
      if (!condition_true) return -1;
      return positive ? 1 : 0;
    case Kind::Iff:
      return positive == condition_true ? 1 : 0;
  }
  return -1;
}

namespace {

const EventData& event_data(const std::map<EventId, EventData>& data, const EventId& e) {
  auto it = data.find(e);
  if (it == data.end()) throw ModelError("event '" + e + "' has no data");
  return it->second;
}

// Every designated world admits some applicable designated event.
template <typename Events, typename Data>
bool applicable_impl(const EpistemicState& s, const Events& designated, const Data& data) {
  for (const auto& w : s.designated) {
    bool covered = false;
    for (const auto& e : designated)
      if (evaluate_at_world(s, w, event_data(data, e).pre)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

// Weaker gate for computing updates: the designated set of the result would
// be non-empty. Designated worlds without an applicable designated event
// drop out of it.
template <typename Events, typename Data>
bool updatable_impl(const EpistemicState& s, const Events& designated, const Data& data) {
  for (const auto& w : s.designated)
    for (const auto& e : designated)
      if (evaluate_at_world(s, w, event_data(data, e).pre)) return true;
  return false;
}

std::string pair_world(const WorldId& w, const EventId& e) { return "(" + w + "|" + e + ")"; }

struct UpdateCore {
  std::vector<std::pair<WorldId, EventId>> pairs;  // surviving (w, e), in (world, event) order
  std::map<std::pair<WorldId, EventId>, std::string> name;
};

UpdateCore update_core(const EpistemicState& s, const std::vector<EventId>& events,
                       const std::map<EventId, EventData>& data, std::size_t world_cap) {
  UpdateCore core;
  for (const auto& w : s.worlds)
    for (const auto& e : events)
      if (evaluate_at_world(s, w, event_data(data, e).pre)) {
        core.pairs.push_back({w, e});
        core.name[{w, e}] = pair_world(w, e);
        if (world_cap && core.pairs.size() > world_cap)
          throw StateOverflowError("product update exceeds world cap of " +
                                   std::to_string(world_cap));
      }
  return core;
}

std::set<Atom> updated_label(const EpistemicState& s, const WorldId& w, const EventData& ed,
                             const std::string& action_name, const EventId& e) {
  std::set<Atom> label = s.labels.at(w);
  // Per-world consistency of triggered effects, when the clause structure is known.
  for (const auto& [atom, clauses] : ed.post_clauses) {
    bool saw_true = false, saw_false = false;
    for (const auto& clause : clauses) {
      bool cond = !clause.condition || evaluate_at_world(s, w, clause.condition);
      int assigned = clause.assignment(cond);
      if (assigned == 1) saw_true = true;
      if (assigned == 0) saw_false = true;
    }
    if (saw_true && saw_false)
      throw InconsistentEffectsError("event '" + e + "' of action '" + action_name +
                                     "' assigns both values to atom '" + atom +
                                     "' in world '" + w + "'");
  }
  for (const auto& [atom, post] : ed.post) {
    if (evaluate_at_world(s, w, post))
      label.insert(atom);
    else
      label.erase(atom);
  }
  return label;
}

}  // namespace

bool is_applicable(const EpistemicState& s, const EpistemicAction& a) {
  return applicable_impl(s, a.designated, a.model.data);
}

bool is_applicable(const EpistemicState& s, const AbstractAction& a) {
  return applicable_impl(s, a.designated, a.data);
}

EpistemicState product_update(const EpistemicState& s, const EpistemicAction& a,
                              std::size_t world_cap) {
  if (!updatable_impl(s, a.designated, a.model.data))
    throw NotApplicableError("action '" + a.name +
                             "' leaves no designated world; the update is undefined");
  UpdateCore core = update_core(s, a.model.events, a.model.data, world_cap);

  EpistemicState out;
  out.agents = s.agents;
  for (const auto& [w, e] : core.pairs) {
    const std::string& id = core.name.at({w, e});
    out.worlds.push_back(id);
    out.labels[id] = updated_label(s, w, event_data(a.model.data, e), a.name, e);
    if (s.designated.count(w) && a.designated.count(e)) out.designated.insert(id);
  }
  for (const auto& agent : s.agents) {
    auto rit = s.relations.find(agent);
    auto qit = a.model.relations.find(agent);
    if (rit == s.relations.end() || qit == a.model.relations.end()) continue;
    for (const auto& [w, v] : rit->second)
      for (const auto& [e, f] : qit->second) {
        auto from = core.name.find({w, e});
        auto to = core.name.find({v, f});
        if (from != core.name.end() && to != core.name.end())
          out.relations[agent].insert({from->second, to->second});
      }
  }
  return out;
}

ObsTypeId observability_type_of(const AbstractAction& a, const EpistemicState& s,
                                const AgentId& agent) {
  auto it = a.obs.find(agent);
  if (it == a.obs.end())
    throw MalformedObservabilityError("action '" + a.name +
                                      "' has no observability function for agent '" + agent + "'");
  ObsTypeId chosen;
  int hits = 0;
  for (const auto& t : a.obs_types) {
    auto cit = it->second.find(t);
    if (cit == it->second.end()) continue;  // omitted condition = false
    if (evaluate(s, cit->second)) {
      chosen = t;
      ++hits;
    }
  }
  if (hits != 1)
    throw MalformedObservabilityError(
        "action '" + a.name + "': " + std::to_string(hits) +
        " observability conditions hold for agent '" + agent + "'");
  return chosen;
}

EpistemicState abstract_product_update(const EpistemicState& s, const AbstractAction& a,
                                       std::size_t world_cap) {
  if (!updatable_impl(s, a.designated, a.data))
    throw NotApplicableError("action '" + a.name +
                             "' leaves no designated world; the update is undefined");
  // Types are induced by the input state, before any update.
  std::map<AgentId, ObsTypeId> type_of;
  for (const auto& agent : s.agents) type_of[agent] = observability_type_of(a, s, agent);

  UpdateCore core = update_core(s, a.events, a.data, world_cap);
  EpistemicState out;
  out.agents = s.agents;
  for (const auto& [w, e] : core.pairs) {
    const std::string& id = core.name.at({w, e});
    out.worlds.push_back(id);
    out.labels[id] = updated_label(s, w, event_data(a.data, e), a.name, e);
    if (s.designated.count(w) && a.designated.count(e)) out.designated.insert(id);
  }
  for (const auto& agent : s.agents) {
    auto rit = s.relations.find(agent);
    auto qit = a.typed_relations.find(type_of.at(agent));
    if (rit == s.relations.end() || qit == a.typed_relations.end()) continue;
    for (const auto& [w, v] : rit->second)
      for (const auto& [e, f] : qit->second) {
        auto from = core.name.find({w, e});
        auto to = core.name.find({v, f});
        if (from != core.name.end() && to != core.name.end())
          out.relations[agent].insert({from->second, to->second});
      }
  }
  return out;
}

EpistemicAction induce(const AbstractAction& a, const EpistemicState& s) {
  EpistemicAction out;
  out.name = a.name;
  out.model.events = a.events;
  out.model.data = a.data;
  out.designated = a.designated;
  for (const auto& agent : s.agents) {
    ObsTypeId t = observability_type_of(a, s, agent);
    auto it = a.typed_relations.find(t);
    if (it != a.typed_relations.end() && !it->second.empty()) out.model.relations[agent] = it->second;
  }
  return out;
}

AbstractAction abstract_action(const EpistemicAction& x, const std::vector<AgentId>& agents) {
  AbstractAction out;
  out.name = x.name;
  out.type_name = "abstraction";
  out.events = x.model.events;
  out.data = x.model.data;
  out.designated = x.designated;

  static const EventRelationSet empty;
  auto relation_of = [&](const AgentId& i) -> const EventRelationSet& {
    auto it = x.model.relations.find(i);
    return it == x.model.relations.end() ? empty : it->second;
  };

  // Observability types = classes of agents with equal accessibility relations,
  // in first-occurrence order.
  std::vector<std::vector<AgentId>> classes;
  for (const auto& i : agents) {
    bool placed = false;
    for (auto& cls : classes)
      if (relation_of(cls.front()) == relation_of(i)) {
        cls.push_back(i);
        placed = true;
        break;
      }
    if (!placed) classes.push_back({i});
  }
  for (const auto& cls : classes) {
    std::string type;
    for (const auto& i : cls) type += (type.empty() ? "" : ",") + i;
    out.obs_types.push_back(type);
    const EventRelationSet& rel = relation_of(cls.front());
    if (!rel.empty()) out.typed_relations[type] = rel;
    for (const auto& i : cls) out.obs[i][type] = Formula::truth();
  }
  return out;
}

namespace {

template <typename K, typename V>
std::map<K, V> drop_empty(const std::map<K, V>& m) {
  std::map<K, V> out;
  for (const auto& [k, v] : m)
    if (!v.empty()) out.emplace(k, v);
  return out;
}

bool formula_maps_equal(const std::map<Atom, FormulaPtr>& a, const std::map<Atom, FormulaPtr>& b) {
  if (a.size() != b.size()) return false;
  auto it = b.begin();
  for (const auto& [k, v] : a) {
    if (it->first != k || !equal(v, it->second)) return false;
    ++it;
  }
  return true;
}

bool data_maps_equal(const std::map<EventId, EventData>& a, const std::map<EventId, EventData>& b) {
  if (a.size() != b.size()) return false;
  auto it = b.begin();
  for (const auto& [k, v] : a) {
    if (it->first != k || !(v == it->second)) return false;
    ++it;
  }
  return true;
}

}  // namespace

bool operator==(const EventData& a, const EventData& b) {
  return equal(a.pre, b.pre) && formula_maps_equal(a.post, b.post);
}

bool operator==(const EpistemicAction& a, const EpistemicAction& b) {
  std::set<EventId> ea(a.model.events.begin(), a.model.events.end());
  std::set<EventId> eb(b.model.events.begin(), b.model.events.end());
  return ea == eb && drop_empty(a.model.relations) == drop_empty(b.model.relations) &&
         data_maps_equal(a.model.data, b.model.data) && a.designated == b.designated;
}

bool operator==(const AbstractAction& a, const AbstractAction& b) {
  std::set<EventId> ea(a.events.begin(), a.events.end());
  std::set<EventId> eb(b.events.begin(), b.events.end());
  if (!(ea == eb && drop_empty(a.typed_relations) == drop_empty(b.typed_relations) &&
        data_maps_equal(a.data, b.data) && a.designated == b.designated))
    return false;
  std::set<ObsTypeId> ta(a.obs_types.begin(), a.obs_types.end());
  std::set<ObsTypeId> tb(b.obs_types.begin(), b.obs_types.end());
  if (ta != tb) return false;
  if (a.obs.size() != b.obs.size()) return false;
  auto it = b.obs.begin();
  for (const auto& [agent, conds] : a.obs) {
    if (it->first != agent || !formula_maps_equal(conds, it->second)) return false;
    ++it;
  }
  return true;
}

bool states_equal(const EpistemicState& a, const EpistemicState& b) {
  std::set<WorldId> wa(a.worlds.begin(), a.worlds.end());
  std::set<WorldId> wb(b.worlds.begin(), b.worlds.end());
  return wa == wb && a.labels == b.labels && drop_empty(a.relations) == drop_empty(b.relations) &&
         a.designated == b.designated;
}

}  // namespace epddl
