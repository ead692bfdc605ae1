#pragma once

// Random desk-scale models, formulas and actions for property tests.
// Everything is seeded; suites stay reproducible.

#include <random>
#include <string>
#include <vector>

#include "epddl/action.hpp"
#include "epddl/state.hpp"

namespace gen {

using namespace epddl;

struct Rng {
  std::mt19937 engine;
  explicit Rng(unsigned seed) : engine(seed) {}
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(engine) < p; }
};

inline std::vector<AgentId> agents(int n) {
  std::vector<AgentId> out;
  for (int i = 0; i < n; ++i) out.push_back("ag" + std::to_string(i));
  return out;
}

inline std::vector<Atom> atoms(int n) {
  std::vector<Atom> out;
  for (int i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

// Arbitrary small state: <=5 worlds, edge density ~0.4, random labels.
inline EpistemicState state(Rng& rng, int max_worlds = 5, int n_agents = 3, int n_atoms = 6) {
  EpistemicState s;
  s.agents = agents(n_agents);
  std::vector<Atom> universe = atoms(n_atoms);
  int n = 1 + rng.below(max_worlds);
  for (int w = 0; w < n; ++w) {
    std::string id = "w" + std::to_string(w);
    s.worlds.push_back(id);
    auto& label = s.labels[id];
    for (const auto& p : universe)
      if (rng.chance(0.5)) label.insert(p);
  }
  for (const auto& agent : s.agents)
    for (const auto& a : s.worlds)
      for (const auto& b : s.worlds)
        if (rng.chance(0.4)) s.relations[agent].insert({a, b});
  int n_designated = 1 + rng.below(n);
  for (int k = 0; k < n_designated; ++k) s.designated.insert(s.worlds[rng.below(n)]);
  return s;
}

inline FormulaPtr formula(Rng& rng, const std::vector<AgentId>& agents,
                          const std::vector<Atom>& universe, int depth) {
  int pick = depth == 0 ? rng.below(3) : rng.below(9);
  auto sub = [&](int d) { return formula(rng, agents, universe, d); };
  switch (pick) {
    case 0: return Formula::make_atom(universe[rng.below((int)universe.size())]);
    case 1: return rng.chance(0.5) ? Formula::truth() : Formula::falsity();
    case 2: return Formula::make_atom(universe[rng.below((int)universe.size())]);
    case 3: return Formula::negate(sub(depth - 1));
    case 4: {
      std::vector<FormulaPtr> fs;
      int n = 1 + rng.below(3);
      for (int i = 0; i < n; ++i) fs.push_back(sub(depth - 1));
      return Formula::conj(std::move(fs));
    }
    case 5: {
      std::vector<FormulaPtr> fs;
      int n = 1 + rng.below(3);
      for (int i = 0; i < n; ++i) fs.push_back(sub(depth - 1));
      return Formula::disj(std::move(fs));
    }
    case 6: return Formula::implies(sub(depth - 1), sub(depth - 1));
    default: {
      ModalKind kinds[] = {ModalKind::Box,    ModalKind::Diamond,   ModalKind::KwBox,
                           ModalKind::KwDiamond, ModalKind::CKBox, ModalKind::CKDiamond};
      ModalKind kind = kinds[rng.below(6)];
      bool group = kind == ModalKind::CKBox || kind == ModalKind::CKDiamond || rng.chance(0.4);
      if (group) {
        std::vector<AgentId> idx;
        int n = 1 + rng.below((int)agents.size());
        for (int i = 0; i < n; ++i) idx.push_back(agents[rng.below((int)agents.size())]);
        return Formula::modal_group(kind, std::move(idx), sub(depth - 1));
      }
      return Formula::modal(kind, agents[rng.below((int)agents.size())], sub(depth - 1));
    }
  }
}

// Random standard action with <=3 events, propositional or shallow-modal
// preconditions and sparse iff/always postconditions.
inline EpistemicAction action(Rng& rng, const std::vector<AgentId>& ags,
                              const std::vector<Atom>& universe) {
  EpistemicAction a;
  a.name = "act";
  int n = 1 + rng.below(3);
  for (int e = 0; e < n; ++e) a.model.events.push_back("e" + std::to_string(e));
  for (const auto& agent : ags)
    for (const auto& e : a.model.events)
      for (const auto& f : a.model.events)
        if (rng.chance(0.45)) a.model.relations[agent].insert({e, f});
  for (const auto& e : a.model.events) {
    auto& data = a.model.data[e];
    data.pre = rng.chance(0.3) ? Formula::truth() : formula(rng, ags, universe, 1);
    int n_effects = rng.below(3);
    for (int k = 0; k < n_effects; ++k) {
      const Atom& p = universe[rng.below((int)universe.size())];
      EffectClause clause;
      if (rng.chance(0.5)) {
        clause.kind = EffectClause::Kind::Always;
        clause.positive = rng.chance(0.5);
      } else {
        clause.kind = EffectClause::Kind::Iff;
        clause.positive = true;
        clause.condition = formula(rng, ags, universe, 1);
      }
      data.post_clauses[p] = {clause};
      data.post[p] = clause.postcondition(p);
    }
  }
  int nd = 1 + rng.below(n);
  for (int k = 0; k < nd; ++k) a.designated.insert(a.model.events[rng.below(n)]);
  return a;
}

// Random abstract action with <=3 events and 1..3 observability types chosen
// by mutually exclusive, covering conditions over one pivot atom each.
inline AbstractAction abstract(Rng& rng, const std::vector<AgentId>& ags,
                               const std::vector<Atom>& universe) {
  AbstractAction a;
  a.name = "abs";
  a.type_name = "random";
  int n = 1 + rng.below(3);
  for (int e = 0; e < n; ++e) a.events.push_back("e" + std::to_string(e));
  int nt = 1 + rng.below(3);
  for (int t = 0; t < nt; ++t) a.obs_types.push_back("t" + std::to_string(t));
  for (const auto& t : a.obs_types)
    for (const auto& e : a.events)
      for (const auto& f : a.events)
        if (rng.chance(0.5)) a.typed_relations[t].insert({e, f});
  for (const auto& e : a.events) {
    auto& data = a.data[e];
    data.pre = rng.chance(0.3) ? Formula::truth() : formula(rng, ags, universe, 1);
    if (rng.chance(0.4)) {
      const Atom& p = universe[rng.below((int)universe.size())];
      EffectClause clause{EffectClause::Kind::Always, rng.chance(0.5), nullptr};
      data.post_clauses[p] = {clause};
      data.post[p] = clause.postcondition(p);
    }
  }
  for (const auto& agent : ags) {
    // if-then-else chain over pivot atoms; the last type takes the negations.
    std::vector<FormulaPtr> negated;
    for (int t = 0; t + 1 < nt; ++t) {
      FormulaPtr pivot = Formula::make_atom(universe[rng.below((int)universe.size())]);
      std::vector<FormulaPtr> cond = negated;
      cond.push_back(pivot);
      a.obs[agent][a.obs_types[t]] = cond.size() == 1 ? cond[0] : Formula::conj(cond);
      negated.push_back(Formula::negate(pivot));
    }
    a.obs[agent][a.obs_types[nt - 1]] =
        negated.empty() ? Formula::truth()
                        : (negated.size() == 1 ? negated[0] : Formula::conj(negated));
  }
  int nd = 1 + rng.below(n);
  for (int k = 0; k < nd; ++k) a.designated.insert(a.events[rng.below(n)]);
  return a;
}

}  // namespace gen
