#include "epddl/state.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "epddl/bisim.hpp"
#include "epddl/errors.hpp"

namespace epddl {

bool EpistemicState::has_world(const WorldId& w) const {
  return labels.count(w) > 0;
}

bool EpistemicState::has_agent(const AgentId& i) const {
  return std::find(agents.begin(), agents.end(), i) != agents.end();
}

void EpistemicState::validate() const {
  if (worlds.empty()) throw ModelError("epistemic state has no worlds");
  std::set<WorldId> seen(worlds.begin(), worlds.end());
  if (seen.size() != worlds.size()) throw ModelError("duplicate world id");
  for (const auto& w : worlds)
    if (!labels.count(w)) throw ModelError("world '" + w + "' has no label");
  for (const auto& [w, atoms] : labels) {
    (void)atoms;
    if (!seen.count(w)) throw ModelError("label for unknown world '" + w + "'");
  }
  for (const auto& [agent, rel] : relations) {
    if (!has_agent(agent)) throw ModelError("relation for unknown agent '" + agent + "'");
    for (const auto& [a, b] : rel)
      if (!seen.count(a) || !seen.count(b))
        throw ModelError("relation of '" + agent + "' references unknown world");
  }
  if (designated.empty()) throw ModelError("designated world set is empty");
  for (const auto& w : designated)
    if (!seen.count(w)) throw ModelError("designated world '" + w + "' is not a world");
}

namespace {

// Successor view built once per top-level evaluation.
struct SuccIndex {
  std::map<AgentId, std::map<WorldId, std::vector<WorldId>>> succ;

  explicit SuccIndex(const EpistemicState& s) {
    for (const auto& [agent, rel] : s.relations) {
      auto& per_world = succ[agent];
      for (const auto& [a, b] : rel) per_world[a].push_back(b);
    }
  }

  const std::vector<WorldId>& of(const AgentId& i, const WorldId& w) const {
    static const std::vector<WorldId> empty;
    auto it = succ.find(i);
    if (it == succ.end()) return empty;
    auto jt = it->second.find(w);
    return jt == it->second.end() ? empty : jt->second;
  }
};

void check_agent(const EpistemicState& s, const AgentId& i) {
  if (!s.has_agent(i)) throw ModelError("unknown agent '" + i + "' in modal index");
}

bool eval(const EpistemicState& s, const SuccIndex& idx, const WorldId& w, const Formula& f);

bool eval_box(const EpistemicState& s, const SuccIndex& idx, const WorldId& w,
              const AgentId& i, const Formula& body, bool positive) {
  // positive=true: B_i body; positive=false: B_i not body.
  for (const auto& v : idx.of(i, w))
    if (eval(s, idx, v, body) != positive) return false;
  return true;
}

bool eval_ck(const EpistemicState& s, const SuccIndex& idx, const WorldId& w,
             const std::vector<AgentId>& group, const Formula& body, bool box) {
  // Worlds reachable in one or more steps over the union relation R_G.
  std::set<WorldId> visited;
  std::deque<WorldId> queue;
  for (const auto& i : group)
    for (const auto& v : idx.of(i, w))
      if (visited.insert(v).second) queue.push_back(v);
  while (!queue.empty()) {
    WorldId v = queue.front();
    queue.pop_front();
    if (eval(s, idx, v, body) != box) return !box;
    for (const auto& i : group)
      for (const auto& u : idx.of(i, v))
        if (visited.insert(u).second) queue.push_back(u);
  }
  return box;
}

bool eval(const EpistemicState& s, const SuccIndex& idx, const WorldId& w, const Formula& f) {
  switch (f.tag) {
    case Formula::Tag::True:
      return true;
    case Formula::Tag::False:
      return false;
    case Formula::Tag::Atom: {
      const auto& label = s.labels.at(w);
      return label.count(f.atom) > 0;
    }
    case Formula::Tag::Not:
      return !eval(s, idx, w, *f.children[0]);
    case Formula::Tag::And:
      for (const auto& c : f.children)
        if (!eval(s, idx, w, *c)) return false;
      return true;
    case Formula::Tag::Or:
      for (const auto& c : f.children)
        if (eval(s, idx, w, *c)) return true;
      return false;
    case Formula::Tag::Imply:
      return !eval(s, idx, w, *f.children[0]) || eval(s, idx, w, *f.children[1]);
    case Formula::Tag::Modal:
      break;
  }
  const Formula& body = *f.children[0];
  for (const auto& i : f.index) check_agent(s, i);
  switch (f.kind) {
    case ModalKind::Box: {
      // Group box expands as the conjunction over members.
      for (const auto& i : f.index)
        if (!eval_box(s, idx, w, i, body, true)) return false;
      return true;
    }
    case ModalKind::Diamond: {
      for (const auto& i : f.index) {
        bool some = false;
        for (const auto& v : idx.of(i, w))
          if (eval(s, idx, v, body)) { some = true; break; }
        if (some) return true;
      }
      return false;
    }
    case ModalKind::KwBox: {
      // Kw_i = B_i phi or B_i not phi; groups expand as conjunctions.
      for (const auto& i : f.index) {
        if (!eval_box(s, idx, w, i, body, true) && !eval_box(s, idx, w, i, body, false))
          return false;
      }
      return true;
    }
    case ModalKind::KwDiamond: {
      // <Kw>_i = not Kw_i (not phi) = not Kw_i phi; groups expand as disjunctions.
      for (const auto& i : f.index) {
        if (!eval_box(s, idx, w, i, body, true) && !eval_box(s, idx, w, i, body, false))
          return true;
      }
      return false;
    }
    case ModalKind::CKBox:
      return eval_ck(s, idx, w, f.index, body, true);
    case ModalKind::CKDiamond:
      return eval_ck(s, idx, w, f.index, body, false);
  }
  return false;
}

}  // namespace

bool evaluate_at_world(const EpistemicState& model, const WorldId& world, const FormulaPtr& phi) {
  if (!model.has_world(world)) throw ModelError("unknown world id '" + world + "'");
  SuccIndex idx(model);
  return eval(model, idx, world, *phi);
}

bool evaluate(const EpistemicState& state, const FormulaPtr& phi) {
  SuccIndex idx(state);
  for (const auto& w : state.designated) {
    if (!state.has_world(w)) throw ModelError("unknown designated world '" + w + "'");
    if (!eval(state, idx, w, *phi)) return false;
  }
  return true;
}

FrameReport frame_report(const EpistemicState& model) {
  FrameReport report;
  bool all_s5 = !model.agents.empty();
  bool all_kd45 = !model.agents.empty();
  for (const auto& agent : model.agents) {
    static const RelationSet empty;
    auto it = model.relations.find(agent);
    const RelationSet& rel = it == model.relations.end() ? empty : it->second;

    AgentFrameFlags flags;
    flags.reflexive = true;
    flags.serial = true;
    std::map<WorldId, std::set<WorldId>> succ;
    for (const auto& [a, b] : rel) succ[a].insert(b);
    for (const auto& w : model.worlds) {
      const auto& sw = succ[w];
      if (!sw.count(w)) flags.reflexive = false;
      if (sw.empty()) flags.serial = false;
    }
    flags.transitive = true;
    flags.euclidean = true;
    for (const auto& [w, sw] : succ) {
      for (const auto& x : sw) {
        for (const auto& y : succ[x])
          if (!sw.count(y)) { flags.transitive = false; break; }
        if (!flags.transitive) break;
      }
      // wRx and wRy imply xRy
      for (const auto& x : sw) {
        for (const auto& y : sw)
          if (!succ[x].count(y)) { flags.euclidean = false; break; }
        if (!flags.euclidean) break;
      }
      if (!flags.transitive && !flags.euclidean) break;
    }

    all_s5 = all_s5 && flags.reflexive && flags.transitive && flags.euclidean;
    all_kd45 = all_kd45 && flags.serial && flags.transitive && flags.euclidean;
    report.per_agent[agent] = flags;
  }
  report.classification =
      all_s5 ? FrameClass::S5 : (all_kd45 ? FrameClass::KD45 : FrameClass::Neither);
  return report;
}

const char* frame_class_name(FrameClass c) {
  switch (c) {
    case FrameClass::S5: return "S5";
    case FrameClass::KD45: return "KD45";
    case FrameClass::Neither: return "neither";
  }
  return "?";
}

EpistemicState disjoint_union(const std::vector<EpistemicState>& states) {
  if (states.empty()) throw ModelError("disjoint union of an empty state list");
  EpistemicState out;
  for (const auto& s : states)
    for (const auto& agent : s.agents)
      if (!out.has_agent(agent)) out.agents.push_back(agent);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = states[k];
    auto tag = [&](const WorldId& w) { return std::to_string(k) + "#" + w; };
    for (const auto& w : s.worlds) {
      out.worlds.push_back(tag(w));
      out.labels[tag(w)] = s.labels.at(w);
    }
    for (const auto& [agent, rel] : s.relations)
      for (const auto& [a, b] : rel) out.relations[agent].insert({tag(a), tag(b)});
    for (const auto& w : s.designated) out.designated.insert(tag(w));
  }
  return out;
}

PointingReport analyze_pointing(const EpistemicState& state) {
  PointingReport report;
  report.global = state.designated.size() == 1;

  for (const auto& agent : state.agents) {
    auto it = state.relations.find(agent);
    bool closed = true;
    if (it != state.relations.end()) {
      for (const auto& [a, b] : it->second)
        if (state.designated.count(a) && !state.designated.count(b)) { closed = false; break; }
    }
    if (closed) report.local_for.insert(agent);
  }

  // Components of the designated-reachable submodel (undirected over all agents),
  // each pointed at its designated worlds; non-deterministic iff two components
  // are non-bisimilar.
  std::map<WorldId, std::set<WorldId>> adj;
  for (const auto& [agent, rel] : state.relations) {
    (void)agent;
    for (const auto& [a, b] : rel) {
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }
  std::map<WorldId, int> component;
  int n_components = 0;
  for (const auto& d : state.designated) {
    if (component.count(d)) continue;
    int id = n_components++;
    std::deque<WorldId> queue{d};
    component[d] = id;
    while (!queue.empty()) {
      WorldId w = queue.front();
      queue.pop_front();
      for (const auto& v : adj[w])
        if (!component.count(v)) {
          component[v] = id;
          queue.push_back(v);
        }
    }
  }

  std::vector<EpistemicState> parts(n_components);
  for (int c = 0; c < n_components; ++c) parts[c].agents = state.agents;
  for (const auto& w : state.worlds) {
    auto it = component.find(w);
    if (it == component.end()) continue;  // not reachable from any designated world
    auto& part = parts[it->second];
    part.worlds.push_back(w);
    part.labels[w] = state.labels.at(w);
  }
  for (const auto& [agent, rel] : state.relations)
    for (const auto& [a, b] : rel) {
      auto it = component.find(a);
      if (it != component.end()) parts[it->second].relations[agent].insert({a, b});
    }
  for (const auto& d : state.designated) parts[component.at(d)].designated.insert(d);

  report.nondeterministic = false;
  for (std::size_t i = 0; i + 1 < parts.size() && !report.nondeterministic; ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (!bisimilar(parts[i], parts[j])) { report.nondeterministic = true; break; }
  return report;
}

}  // namespace epddl
