#include "epddl/ground.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace epddl {

using namespace ast;

std::vector<std::string> EntityTable::typed_set(const TypeRef& type) const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& entity : order) {
    const std::string& prim = type_of.at(entity);
    for (const auto& super : type.primitives)
      if (types->compatible(prim, super)) {
        if (seen.insert(entity).second) out.push_back(entity);
        break;
      }
  }
  return out;
}

const AbstractAction* GroundTask::find_action(const std::string& name) const {
  for (const auto& [n, action] : actions)
    if (n == name) return &action;
  return nullptr;
}

namespace {

bool eval_propositional(const FormulaPtr& phi, const std::set<Atom>& truth) {
  switch (phi->tag) {
    case Formula::Tag::True: return true;
    case Formula::Tag::False: return false;
    case Formula::Tag::Atom: return truth.count(phi->atom) > 0;
    case Formula::Tag::Not: return !eval_propositional(phi->children[0], truth);
    case Formula::Tag::And:
      for (const auto& c : phi->children)
        if (!eval_propositional(c, truth)) return false;
      return true;
    case Formula::Tag::Or:
      for (const auto& c : phi->children)
        if (eval_propositional(c, truth)) return true;
      return false;
    case Formula::Tag::Imply:
      return !eval_propositional(phi->children[0], truth) ||
             eval_propositional(phi->children[1], truth);
    case Formula::Tag::Modal:
      throw GroundError("modal formula where a propositional one was expected");
  }
  return false;
}

std::set<Atom> all_fact_atoms(const TypedSpec& spec, const EntityTable& table) {
  std::set<Atom> out;
  for (const auto& name : spec.predicate_order) {
    const PredicateInfo& info = spec.predicates.at(name);
    if (!info.is_fact) continue;
    std::vector<std::vector<std::string>> tuples = {{}};
    for (const auto& type : info.param_types) {
      std::vector<std::vector<std::string>> next;
      for (const auto& tuple : tuples)
        for (const auto& entity : table.typed_set(type)) {
          auto extended = tuple;
          extended.push_back(entity);
          next.push_back(std::move(extended));
        }
      tuples = std::move(next);
    }
    for (const auto& tuple : tuples) out.insert(make_atom_name(name, tuple));
  }
  return out;
}

void collect_atoms(const FormulaPtr& phi, std::set<Atom>& atoms) {
  if (phi->tag == Formula::Tag::Atom) atoms.insert(phi->atom);
  for (const auto& c : phi->children) collect_atoms(c, atoms);
}

}  // namespace

GroundContext::GroundContext(const TypedSpec& spec, EntityTable table)
    : spec_(spec), table_(std::move(table)), facts_true_(spec.facts_true) {
  if (!table_.types) table_.types = &spec.types;
}

std::vector<std::string> GroundContext::typed_set(const TypeRef& type) const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto append = [&](const std::vector<std::string>& items) {
    for (const auto& item : items)
      if (seen.insert(item).second) out.push_back(item);
  };
  for (const auto& prim : type.primitives) {
    if (prim == "world") {
      append(world_scope);
    } else if (prim == "event") {
      append(event_scope);
    } else if (prim == "obs-type") {
      append(obs_type_scope);
    } else {
      TypeRef single;
      single.primitives = {prim};
      append(table_.typed_set(single));
    }
  }
  return out;
}

std::vector<std::vector<std::string>> GroundContext::induced_power_set(
    const Params& params, const Binding& outer) const {
  std::vector<std::vector<std::string>> tuples = {{}};
  for (const auto& var : params.vars) {
    std::vector<std::vector<std::string>> next;
    const auto domain = typed_set(var.type);
    for (const auto& tuple : tuples)
      for (const auto& entity : domain) {
        auto extended = tuple;
        extended.push_back(entity);
        next.push_back(std::move(extended));
      }
    tuples = std::move(next);
  }
  if (!params.condition) return tuples;
  std::vector<std::vector<std::string>> satisfying;
  for (const auto& tuple : tuples) {
    Binding binding = outer;
    for (std::size_t i = 0; i < params.vars.size(); ++i) binding[params.vars[i].var] = tuple[i];
    if (holds_in_facts(translate(params.condition, binding))) satisfying.push_back(tuple);
  }
  return satisfying;
}

std::string GroundContext::resolve_term(const std::string& term, const Binding& binding) const {
  if (!term.empty() && term[0] == '?') {
    auto it = binding.find(term);
    if (it == binding.end()) throw GroundError("unbound variable '" + term + "'");
    return it->second;
  }
  return term;
}

Atom GroundContext::ground_atom(const PredRef& pred, const Binding& binding) const {
  std::vector<std::string> args;
  for (const auto& a : pred.args) args.push_back(resolve_term(a, binding));
  return make_atom_name(pred.name, args);
}

bool GroundContext::holds_in_facts(const FormulaPtr& phi) const {
  return eval_propositional(phi, facts_true_);
}

std::vector<AgentId> GroundContext::index_agents(const ModalIndex& index, const Binding& binding,
                                                 bool* is_group) const {
  auto expand_entity = [&](const std::string& entity, std::vector<AgentId>& out) {
    auto group = table_.groups.find(entity);
    if (group != table_.groups.end()) {
      for (const auto& member : group->second) out.push_back(member);
    } else {
      out.push_back(entity);
    }
  };
  switch (index.kind) {
    case ModalIndex::Kind::All:
      *is_group = true;
      return spec_.agents;
    case ModalIndex::Kind::Term: {
      std::string entity = resolve_term(index.term, binding);
      if (table_.groups.count(entity)) {
        *is_group = true;
        std::vector<AgentId> out;
        expand_entity(entity, out);
        if (out.empty()) throw GroundError("agent group '" + entity + "' is empty");
        return out;
      }
      *is_group = false;
      return {entity};
    }
    case ModalIndex::Kind::List: {
      *is_group = true;
      auto tuples = expand_list<TermTuple, std::vector<std::string>>(
          *index.list, binding, [&](const TermTuple& tuple, const Binding& b) {
            std::vector<std::string> resolved;
            for (const auto& t : tuple.terms) resolved.push_back(resolve_term(t, b));
            return resolved;
          });
      std::vector<AgentId> out;
      for (const auto& tuple : tuples)
        for (const auto& term : tuple) expand_entity(term, out);
      if (out.empty()) throw GroundError("modality index expands to an empty agent set");
      return out;
    }
  }
  return {};
}

FormulaPtr GroundContext::translate(const ExprPtr& expr, const Binding& binding) const {
  switch (expr->kind) {
    case Expr::Kind::True:
      return Formula::truth();
    case Expr::Kind::False:
      return Formula::falsity();
    case Expr::Kind::Pred:
      return Formula::make_atom(ground_atom(PredRef{expr->pred_name, expr->args, expr->pos}, binding));
    case Expr::Kind::Eq:
    case Expr::Kind::Neq: {
      bool same = resolve_term(expr->args[0], binding) == resolve_term(expr->args[1], binding);
      bool value = expr->kind == Expr::Kind::Eq ? same : !same;
      return value ? Formula::truth() : Formula::falsity();
    }
    case Expr::Kind::Not:
      return Formula::negate(translate(expr->children[0], binding));
    case Expr::Kind::And: {
      std::vector<FormulaPtr> parts;
      for (const auto& c : expr->children) parts.push_back(translate(c, binding));
      return Formula::conj(std::move(parts));
    }
    case Expr::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& c : expr->children) parts.push_back(translate(c, binding));
      return Formula::disj(std::move(parts));
    }
    case Expr::Kind::Imply:
      return Formula::implies(translate(expr->children[0], binding),
                              translate(expr->children[1], binding));
    case Expr::Kind::Forall:
    case Expr::Kind::Exists: {
      bool universal = expr->kind == Expr::Kind::Forall;
      std::vector<FormulaPtr> parts;
      for (const auto& tuple : induced_power_set(*expr->params, binding)) {
        Binding extended = binding;
        for (std::size_t i = 0; i < expr->params->vars.size(); ++i)
          extended[expr->params->vars[i].var] = tuple[i];
        parts.push_back(translate(expr->children[0], extended));
      }
      if (parts.empty()) return universal ? Formula::truth() : Formula::falsity();
      if (parts.size() == 1) return parts.front();
      return universal ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    case Expr::Kind::Modal:
      break;
  }
  ModalKind kind = ModalKind::Box;
  switch (expr->mname) {
    case Expr::MName::None:
      kind = expr->dual ? ModalKind::Diamond : ModalKind::Box;
      break;
    case Expr::MName::Kw:
      kind = expr->dual ? ModalKind::KwDiamond : ModalKind::KwBox;
      break;
    case Expr::MName::C:
      kind = expr->dual ? ModalKind::CKDiamond : ModalKind::CKBox;
      break;
  }
  bool group = false;
  std::vector<AgentId> agents = index_agents(expr->mindex, binding, &group);
  FormulaPtr body = translate(expr->children[0], binding);
  if (group || agents.size() > 1 || kind == ModalKind::CKBox || kind == ModalKind::CKDiamond)
    return Formula::modal_group(kind, std::move(agents), std::move(body));
  return Formula::modal(kind, agents.front(), std::move(body));
}

Language build_language(const TypedSpec& spec) {
  Language language;
  language.agents = spec.agents;
  language.entities.types = &spec.types;
  language.entities.order = spec.entity_order;
  language.entities.type_of = spec.entity_type;
  language.entities.groups = spec.group_members;

  std::set<Atom> atoms;
  for (const auto& name : spec.predicate_order) {
    const PredicateInfo& info = spec.predicates.at(name);
    std::vector<std::vector<std::string>> tuples = {{}};
    for (const auto& type : info.param_types) {
      std::vector<std::vector<std::string>> next;
      for (const auto& tuple : tuples)
        for (const auto& entity : language.entities.typed_set(type)) {
          auto extended = tuple;
          extended.push_back(entity);
          next.push_back(std::move(extended));
        }
      tuples = std::move(next);
    }
    for (const auto& tuple : tuples) atoms.insert(make_atom_name(name, tuple));
  }
  language.atoms.assign(atoms.begin(), atoms.end());
  std::set<Atom> facts = all_fact_atoms(spec, language.entities);
  language.fact_atoms.assign(facts.begin(), facts.end());
  return language;
}

EpistemicState build_initial_explicit(const TypedSpec& spec, const InitExplicit& init,
                                      GroundContext& ctx) {
  EpistemicState state;
  state.agents = spec.agents;
  state.worlds = init.worlds;
  std::set<WorldId> declared(init.worlds.begin(), init.worlds.end());
  for (const auto& w : init.worlds)
    state.labels[w] = ctx.facts_true();  // facts hold in all possible worlds

  ctx.world_scope = init.worlds;
  for (const auto& rel : init.relations) {
    auto pairs = ctx.expand_list<TermPair, std::pair<std::string, std::string>>(
        rel.pairs, {}, [&](const TermPair& pair, const Binding& b) {
          return std::make_pair(ctx.resolve_term(pair.a, b), ctx.resolve_term(pair.b, b));
        });
    for (const auto& [a, b] : pairs) {
      if (!declared.count(a) || !declared.count(b))
        throw GroundError("relation of agent '" + rel.name +
                          "' references an undeclared world ('" + a + "', '" + b + "')");
      state.relations[rel.name].insert({a, b});
    }
  }
  for (const auto& label : init.labels) {
    if (!declared.count(label.world))
      throw GroundError("label for undeclared world '" + label.world + "'");
    auto atoms = ctx.expand_list<PredRef, Atom>(
        label.preds, {},
        [&](const PredRef& pred, const Binding& b) { return ctx.ground_atom(pred, b); });
    for (const auto& atom : atoms) state.labels[label.world].insert(atom);
  }
  for (const auto& d : init.designated) {
    if (!declared.count(d))
      throw GroundError("designated world '" + d + "' is not declared in ':worlds'");
    state.designated.insert(d);
  }
  state.validate();
  return state;
}

namespace {

struct GroundTheoryFormula {
  TheoryFormula::Kind kind;
  AgentId agent;
  FormulaPtr prop;
  std::string text;

  bool operator<(const GroundTheoryFormula& other) const {
    return std::tie(kind, agent, text) < std::tie(other.kind, other.agent, other.text);
  }
};

}  // namespace

EpistemicState build_initial_finitary(const TypedSpec& spec, const InitTheory& theory,
                                      GroundContext& ctx) {
  auto formulas = ctx.expand_list<TheoryFormula, GroundTheoryFormula>(
      theory.formulas, {}, [&](const TheoryFormula& t, const Binding& b) {
        GroundTheoryFormula out;
        out.kind = t.kind;
        if (!t.agent_term.empty()) out.agent = ctx.resolve_term(t.agent_term, b);
        out.prop = ctx.translate(t.prop, b);
        out.text = out.prop->to_string();
        return out;
      });

  // Worlds range over the atoms the theory mentions plus the fact atoms; all
  // remaining atoms are false by the theory's default convention.
  std::set<Atom> fact_atoms = all_fact_atoms(spec, ctx.entities());
  std::set<Atom> mentioned;
  for (const auto& f : formulas) collect_atoms(f.prop, mentioned);
  std::vector<Atom> free_atoms;
  for (const auto& atom : mentioned)
    if (!fact_atoms.count(atom)) free_atoms.push_back(atom);

  std::vector<FormulaPtr> worlds_conj, design_conj;
  std::map<AgentId, std::vector<FormulaPtr>> kw_props;
  for (const auto& f : formulas) {
    switch (f.kind) {
      case TheoryFormula::Kind::Plain: design_conj.push_back(f.prop); break;
      case TheoryFormula::Kind::CK:
      case TheoryFormula::Kind::CKBelief: worlds_conj.push_back(f.prop); break;
      case TheoryFormula::Kind::CKKw: kw_props[f.agent].push_back(f.prop); break;
      case TheoryFormula::Kind::CKKwd: break;  // uncertainty is the default
    }
  }

  if (free_atoms.size() > 22)
    throw GroundError("finitary S5-theory ranges over " + std::to_string(free_atoms.size()) +
                      " atoms; enumeration limit is 22");

  EpistemicState state;
  state.agents = spec.agents;
  const std::set<Atom>& facts_true = ctx.facts_true();
  std::vector<std::size_t> satisfying;
  for (std::size_t mask = 0; mask < (std::size_t(1) << free_atoms.size()); ++mask) {
    std::set<Atom> label = facts_true;
    for (std::size_t bit = 0; bit < free_atoms.size(); ++bit)
      if (mask & (std::size_t(1) << bit)) label.insert(free_atoms[bit]);
    bool keep = true;
    for (const auto& phi : worlds_conj)
      if (!eval_propositional(phi, label)) { keep = false; break; }
    if (keep) satisfying.push_back(mask);
  }
  // Closed-world reading of the theory's defaults: one world per minimal
  // satisfying valuation, so atoms are false unless the theory forces them.
  std::sort(satisfying.begin(), satisfying.end(), [](std::size_t a, std::size_t b) {
    int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<std::size_t> minimal;
  for (std::size_t mask : satisfying) {
    bool has_subset = false;
    for (std::size_t kept : minimal)
      if ((kept & mask) == kept) { has_subset = true; break; }
    if (!has_subset) minimal.push_back(mask);
  }
  std::sort(minimal.begin(), minimal.end());
  std::vector<std::set<Atom>> labels;
  for (std::size_t mask : minimal) {
    std::set<Atom> label = facts_true;
    for (std::size_t bit = 0; bit < free_atoms.size(); ++bit)
      if (mask & (std::size_t(1) << bit)) label.insert(free_atoms[bit]);
    labels.push_back(std::move(label));
  }
  if (labels.empty())
    throw GroundError("inconsistent finitary S5-theory: no world satisfies it");

  for (std::size_t i = 0; i < labels.size(); ++i) {
    WorldId id = "w" + std::to_string(i + 1);
    state.worlds.push_back(id);
    state.labels[id] = labels[i];
  }
  for (const auto& agent : spec.agents) {
    auto it = kw_props.find(agent);
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = 0; j < labels.size(); ++j) {
        bool keep = true;
        if (it != kw_props.end())
          for (const auto& phi : it->second)
            if (eval_propositional(phi, labels[i]) != eval_propositional(phi, labels[j])) {
              keep = false;
              break;
            }
        if (keep)
          state.relations[agent].insert({state.worlds[i], state.worlds[j]});
      }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bool designated = true;
    for (const auto& phi : design_conj)
      if (!eval_propositional(phi, labels[i])) { designated = false; break; }
    if (designated) state.designated.insert(state.worlds[i]);
  }
  if (state.designated.empty())
    throw GroundError("inconsistent finitary S5-theory: no designated world satisfies it");
  state.validate();
  return state;
}

namespace {

struct GroundLiteral {
  bool positive;
  Atom atom;
  bool operator<(const GroundLiteral& o) const {
    return std::tie(atom, positive) < std::tie(o.atom, o.positive);
  }
};

struct GroundCondEffect {
  CondEffect::Kind kind;
  FormulaPtr condition;  // null for bare literals
  std::string condition_text;
  std::vector<GroundLiteral> literals;

  bool operator<(const GroundCondEffect& o) const {
    return std::tie(kind, condition_text, literals) <
           std::tie(o.kind, o.condition_text, o.literals);
  }
};

struct GroundObsEntry {
  ObsCond::Kind kind;
  std::string subject;  // agent or group; empty for default
  std::string type_name;
  std::vector<std::pair<FormulaPtr, std::string>> branches;  // if/else-if conditions
  std::optional<std::string> else_type;
  std::string key;

  bool operator<(const GroundObsEntry& o) const { return key < o.key; }
};

}  // namespace

std::vector<std::pair<std::string, AbstractAction>> ground_actions(const TypedSpec& spec,
                                                                   GroundContext& ctx) {
  std::vector<std::pair<std::string, AbstractAction>> out;
  std::set<std::string> names;

  for (const auto& action : spec.spec.domain.actions) {
    const ActionTypeDecl& type = spec.action_types.at(action.type_name);
    for (const auto& tuple : ctx.induced_power_set(action.params, {})) {
      Binding binding;
      for (std::size_t i = 0; i < action.params.vars.size(); ++i)
        binding[action.params.vars[i].var] = tuple[i];
      std::string name = make_instance_name(action.name, tuple);
      if (!names.insert(name).second)
        throw GroundError("duplicate ground action name '" + name + "'");

      AbstractAction ground;
      ground.name = name;
      ground.type_name = action.type_name;
      ground.obs_types = type.obs_types;

      // Bind the declared events to the action type's event variables.
      if (action.events.size() != type.event_vars.size())
        throw GroundError("action '" + action.name + "' binds " +
                          std::to_string(action.events.size()) + " events, type '" + type.name +
                          "' expects " + std::to_string(type.event_vars.size()));
      std::map<std::string, EventId> event_of_var;
      for (std::size_t k = 0; k < action.events.size(); ++k) {
        const ActionEventRef& ref = action.events[k];
        std::vector<std::string> args;
        for (const auto& a : ref.args) args.push_back(ctx.resolve_term(a, binding));
        EventId id = make_instance_name(ref.name, args);
        if (event_of_var.count(type.event_vars[k]) ||
            std::count(ground.events.begin(), ground.events.end(), id))
          throw GroundError("action '" + name + "' binds event '" + id + "' twice");
        event_of_var[type.event_vars[k]] = id;
        ground.events.push_back(id);

        const EventDecl& event = spec.event(ref.name);
        if (event.params.size() != args.size())
          throw GroundError("event '" + ref.name + "' takes " +
                            std::to_string(event.params.size()) + " arguments, got " +
                            std::to_string(args.size()));
        Binding event_binding;
        for (std::size_t i = 0; i < event.params.size(); ++i)
          event_binding[event.params[i].var] = args[i];
        EventData data;
        data.pre = event.precondition ? ctx.translate(event.precondition, event_binding)
                                      : Formula::truth();
        if (event.effects) {
          auto effects = ctx.expand_list<CondEffect, GroundCondEffect>(
              *event.effects, event_binding, [&](const CondEffect& ce, const Binding& b) {
                GroundCondEffect g;
                g.kind = ce.kind;
                if (ce.kind == CondEffect::Kind::Literal) {
                  g.literals.push_back(
                      {ce.literal.positive, ctx.ground_atom(ce.literal.pred, b)});
                } else {
                  g.condition = ctx.translate(ce.condition, b);
                  g.condition_text = g.condition->to_string();
                  g.literals = ctx.expand_list<Literal, GroundLiteral>(
                      *ce.literals, b, [&](const Literal& lit, const Binding& lb) {
                        return GroundLiteral{lit.positive, ctx.ground_atom(lit.pred, lb)};
                      });
                }
                return g;
              });
          for (const auto& effect : effects)
            for (const auto& literal : effect.literals) {
              EffectClause clause;
              clause.positive = literal.positive;
              switch (effect.kind) {
                case CondEffect::Kind::Literal: clause.kind = EffectClause::Kind::Always; break;
                case CondEffect::Kind::When: clause.kind = EffectClause::Kind::When; break;
                case CondEffect::Kind::Iff: clause.kind = EffectClause::Kind::Iff; break;
              }
              clause.condition = effect.condition;
              data.post_clauses[literal.atom].push_back(clause);
            }
          for (const auto& [atom, clauses] : data.post_clauses) {
            std::vector<FormulaPtr> parts;
            for (const auto& clause : clauses) parts.push_back(clause.postcondition(atom));
            data.post[atom] = parts.size() == 1 ? parts.front() : Formula::conj(parts);
          }
        }
        ground.data[id] = std::move(data);
      }

      for (const auto& var : type.designated_vars) ground.designated.insert(event_of_var.at(var));

      // Abstract accessibility relations; missing declarations stay empty.
      for (const auto& rel : type.relations) {
        GroundContext scoped = ctx;
        scoped.event_scope = type.event_vars;
        auto pairs = scoped.expand_list<TermPair, std::pair<std::string, std::string>>(
            rel.pairs, {}, [&](const TermPair& pair, const Binding& b) {
              auto resolve = [&](const std::string& term) {
                std::string var = b.count(term) ? b.at(term) : term;
                auto it = event_of_var.find(var);
                if (it == event_of_var.end())
                  throw GroundError("'" + term + "' is not an event variable of type '" +
                                    type.name + "'");
                return it->second;
              };
              return std::make_pair(resolve(pair.a), resolve(pair.b));
            });
        for (const auto& pair : pairs) ground.typed_relations[rel.name].insert(pair);
      }

      // Observability functions. Without declared conditions a single-type
      // action type assigns that type to every agent.
      if (!action.obs && type.obs_types.size() == 1) {
        for (const auto& agent : spec.agents)
          ground.obs[agent][type.obs_types.front()] = Formula::truth();
        out.push_back({std::move(name), std::move(ground)});
        continue;
      }
      std::vector<GroundObsEntry> entries;
      if (action.obs) {
        entries = ctx.expand_list<ObsCond, GroundObsEntry>(
            *action.obs, binding, [&](const ObsCond& cond, const Binding& b) {
              GroundObsEntry entry;
              entry.kind = cond.kind;
              entry.type_name = cond.type_name;
              if (cond.kind != ObsCond::Kind::Default)
                entry.subject = ctx.resolve_term(cond.term, b);
              for (const auto& branch : cond.branches)
                entry.branches.push_back({ctx.translate(branch.condition, b), branch.type_name});
              entry.else_type = cond.else_type;
              entry.key = entry.subject + "|" + std::to_string(int(entry.kind)) + "|" +
                          entry.type_name;
              for (const auto& [phi, t] : entry.branches)
                entry.key += "|" + phi->to_string() + ">" + t;
              if (entry.else_type) entry.key += "|else>" + *entry.else_type;
              return entry;
            });
      }
      std::optional<std::string> default_type;
      for (const auto& entry : entries)
        if (entry.kind == ObsCond::Kind::Default) {
          if (default_type)
            throw GroundError("action '" + name + "' has multiple default observability types");
          default_type = entry.type_name;
        }

      auto add_condition = [&](std::map<ObsTypeId, FormulaPtr>& conds, const ObsTypeId& t,
                               FormulaPtr phi) {
        auto it = conds.find(t);
        if (it == conds.end())
          conds[t] = std::move(phi);
        else
          it->second = Formula::disj({it->second, std::move(phi)});
      };

      for (const auto& agent : spec.agents) {
        const GroundObsEntry* mine = nullptr;
        for (const auto& entry : entries) {
          if (entry.kind == ObsCond::Kind::Default) continue;
          bool applies = entry.subject == agent;
          auto group = spec.group_members.find(entry.subject);
          if (group != spec.group_members.end())
            applies = std::count(group->second.begin(), group->second.end(), agent) > 0;
          if (!applies) continue;
          if (mine)
            throw GroundError("action '" + name + "' has multiple observability conditions for '" +
                              agent + "'");
          mine = &entry;
        }
        auto& conds = ground.obs[agent];
        if (!mine) {
          if (!default_type)
            throw GroundError("action '" + name + "' has no observability condition for '" +
                              agent + "'");
          conds[*default_type] = Formula::truth();
          continue;
        }
        if (mine->kind == ObsCond::Kind::Static) {
          conds[mine->type_name] = Formula::truth();
          continue;
        }
        // if-then-else chain: each branch takes the negations of its predecessors.
        std::vector<FormulaPtr> negated;
        for (const auto& [phi, t] : mine->branches) {
          std::vector<FormulaPtr> parts = negated;
          parts.push_back(phi);
          add_condition(conds, t, parts.size() == 1 ? parts.front() : Formula::conj(parts));
          negated.push_back(Formula::negate(phi));
        }
        FormulaPtr tail = negated.empty()
                              ? Formula::truth()
                              : (negated.size() == 1 ? negated.front() : Formula::conj(negated));
        if (mine->else_type) {
          add_condition(conds, *mine->else_type, std::move(tail));
        } else if (default_type) {
          add_condition(conds, *default_type, std::move(tail));
        } else {
          throw GroundError("if-then-else observability condition of '" + name +
                            "' has no else branch and no default exists");
        }
      }
      out.push_back({std::move(name), std::move(ground)});
    }
  }
  return out;
}

GroundTask build_task(const TypedSpec& spec) {
  Language language = build_language(spec);
  GroundContext ctx(spec, language.entities);

  GroundTask task;
  task.atoms = language.atoms;
  task.agents = language.agents;
  task.facts.atoms = spec.facts_true;

  const Init& init = spec.spec.problem.inits.front();
  if (init.explicit_state)
    task.initial = build_initial_explicit(spec, *init.explicit_state, ctx);
  else
    task.initial = build_initial_finitary(spec, *init.theory, ctx);
  ctx.world_scope.clear();

  task.actions = ground_actions(spec, ctx);

  std::vector<FormulaPtr> goals;
  for (const auto& goal : spec.spec.problem.goals) goals.push_back(ctx.translate(goal, {}));
  if (goals.empty())
    task.goal = Formula::truth();
  else if (goals.size() == 1)
    task.goal = goals.front();
  else
    task.goal = Formula::conj(std::move(goals));

  task.info.problem = spec.spec.problem.name;
  task.info.domain = spec.spec.domain.name;
  task.info.libraries = spec.spec.domain.libraries;
  task.info.requirements.assign(spec.requirements.begin(), spec.requirements.end());
  task.info.agents_number = static_cast<int>(task.agents.size());
  task.info.atoms_number = static_cast<int>(task.atoms.size());
  task.info.facts_number = static_cast<int>(task.facts.atoms.size());
  task.info.actions_number = static_cast<int>(task.actions.size());
  task.info.initial_worlds_number = static_cast<int>(task.initial.worlds.size());
  task.info.goal_modal_depth = task.goal->modal_depth();
  task.info.goal_size = task.goal->size();
  return task;
}

}  // namespace epddl
