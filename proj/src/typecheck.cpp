#include "epddl/typecheck.hpp"

#include <algorithm>
#include <functional>

#include "epddl/ground.hpp"
#include "epddl/parser.hpp"

namespace epddl {

using namespace ast;

TypeEnv::TypeEnv() {
  parent_["entity"] = "";
  parent_["object"] = "entity";
  parent_["agent"] = "entity";
  parent_["agent-group"] = "entity";
  parent_["world"] = "";
  parent_["event"] = "";
  parent_["obs-type"] = "";
}

std::string TypeEnv::declare(const std::string& name, const std::string& supertype) {
  static const std::set<std::string> kSealed = {"entity", "world", "event", "obs-type"};
  if (parent_.count(name)) return "type '" + name + "' is already declared";
  if (!parent_.count(supertype)) return "unknown supertype '" + supertype + "'";
  if (kSealed.count(supertype)) return "type '" + supertype + "' cannot be specialized";
  parent_[name] = supertype;
  return "";
}

bool TypeEnv::known(const std::string& name) const { return parent_.count(name) > 0; }

bool TypeEnv::compatible(const std::string& sub, const std::string& super) const {
  std::string at = sub;
  while (true) {
    if (at == super) return true;
    auto it = parent_.find(at);
    if (it == parent_.end() || it->second.empty()) return false;
    at = it->second;
  }
}

bool TypeEnv::compatible(const TypeRef& a, const TypeRef& b) const {
  for (const auto& ta : a.primitives) {
    bool fits = false;
    for (const auto& tb : b.primitives)
      if (compatible(ta, tb)) {
        fits = true;
        break;
      }
    if (!fits) return false;
  }
  return true;
}

Atom make_atom_name(const std::string& predicate, const std::vector<std::string>& args) {
  Atom out = predicate;
  for (const auto& a : args) out += "_" + a;
  return out;
}

std::string make_instance_name(const std::string& name, const std::vector<std::string>& args) {
  if (args.empty()) return name;
  std::string out = name + "_";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
  return out;
}

namespace {

// The reserved basic action type: one fully observable designated event with
// trivial postconditions.
ActionTypeDecl make_basic_type() {
  ActionTypeDecl basic;
  basic.name = "basic";
  basic.event_vars = {"?e"};
  basic.obs_types = {"Fully"};
  RelationDecl rel;
  rel.name = "Fully";
  rel.pairs.kind = ListNode<TermPair>::Kind::Item;
  rel.pairs.item = TermPair{"?e", "?e", {}};
  basic.relations.push_back(std::move(rel));
  basic.designated_vars = {"?e"};
  basic.conditions.push_back(EventCondKeys{"?e", {":trivial-postconditions"}, {}});
  return basic;
}

struct FormulaContext {
  std::string suffix;        // "preconditions", "goals", ...
  bool list_formula = false; // comprehension condition: facts only, no modalities
  bool theory_body = false;  // finitary theory: shape rules instead of licensing
};

class Checker {
 public:
  explicit Checker(const Spec& spec) { out_.spec = spec; }

  TypedSpec run() {
    check_references();
    resolve_reqs();
    build_types();
    build_entities();
    build_groups();
    build_predicates();
    build_facts();
    check_groups();   // member conditions mention predicates and facts
    expand_groups();  // comprehension conditions range over the facts
    index_events_and_types();
    check_action_types();
    check_events();
    check_actions();
    check_init();
    check_goals();
    check_baseline();
    if (!diags_.empty()) throw TypeCheckError(std::move(diags_));
    return std::move(out_);
  }

 private:
  TypedSpec out_;
  std::vector<Diagnostic> diags_;
  std::vector<std::map<std::string, TypeRef>> scopes_;
  bool baseline_ = false;

  void error(const SourcePos& pos, const std::string& rule, const std::string& message) {
    diags_.push_back({pos, rule, message});
  }

  bool has(const std::string& req) const { return out_.requirements.count(req) > 0; }

  void require(const std::string& req, const SourcePos& pos, const std::string& what) {
    if (!has(req))
      error(pos, "missing-requirement", what + " requires " + req);
  }

  // --- scopes ---

  void push_scope(const std::vector<TypedVar>& vars) {
    std::map<std::string, TypeRef> scope;
    for (const auto& v : vars) {
      if (scope.count(v.var))
        error(v.pos, "duplicate-variable", "variable '" + v.var + "' declared twice");
      scope[v.var] = v.type;
    }
    scopes_.push_back(std::move(scope));
  }

  void pop_scope() { scopes_.pop_back(); }

  const TypeRef* lookup_var(const std::string& var) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(var);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  /// Type of a term: scope lookup for variables, entity table for names.
  std::optional<TypeRef> term_type(const std::string& term, const SourcePos& pos) {
    if (!term.empty() && term[0] == '?') {
      const TypeRef* type = lookup_var(term);
      if (!type) {
        error(pos, "unbound-variable", "variable '" + term + "' is not bound");
        return std::nullopt;
      }
      return *type;
    }
    auto it = out_.entity_type.find(term);
    if (it == out_.entity_type.end()) {
      error(pos, "unknown-entity", "unknown entity '" + term + "'");
      return std::nullopt;
    }
    TypeRef type;
    type.primitives = {it->second};
    return type;
  }

  bool term_is_group(const std::string& term) {
    if (!term.empty() && term[0] == '?') {
      const TypeRef* type = lookup_var(term);
      return type && !type->is_either() &&
             out_.types.compatible(type->primitives.front(), "agent-group");
    }
    return out_.group_members.count(term) > 0;
  }

  // --- passes ---

  void check_references() {
    if (out_.spec.problem.domain_ref != out_.spec.domain.name)
      error(out_.spec.problem.pos, "unknown-domain",
            "problem references domain '" + out_.spec.problem.domain_ref + "' but '" +
                out_.spec.domain.name + "' was given");
    for (const auto& lib : out_.spec.domain.libraries) {
      bool found = false;
      for (const auto& l : out_.spec.libraries) found = found || l.name == lib;
      if (!found)
        error(out_.spec.domain.pos, "unknown-library",
              "domain imports action type library '" + lib + "' which was not provided");
    }
  }

  void resolve_reqs() {
    std::vector<std::string> declared;
    auto gather = [&](const std::vector<RequireDecl>& decls) {
      for (const auto& decl : decls)
        for (const auto& key : decl.keys) {
          if (!all_requirement_keys().count(key))
            error(decl.pos, "unknown-requirement", "unknown requirement key '" + key + "'");
          else
            declared.push_back(key);
        }
    };
    gather(out_.spec.problem.requirements);
    gather(out_.spec.domain.requirements);
    for (const auto& lib : out_.spec.libraries) gather(lib.requirements);
    out_.requirements = resolve_requirements(declared);
    baseline_ = out_.requirements == RequirementSet{":pal"};
  }

  void build_types() {
    for (const auto& group : out_.spec.domain.types) {
      if (!group.names.empty() && !has(":typing"))
        require(":typing", group.pos, "a ':types' declaration");
      std::string supertype = group.supertype.value_or("object");
      if (group.supertype && !out_.types.known(*group.supertype)) {
        error(group.pos, "unknown-type", "unknown supertype '" + *group.supertype + "'");
        continue;
      }
      for (const auto& name : group.names) {
        std::string err = out_.types.declare(name, supertype);
        if (!err.empty()) error(group.pos, "bad-type-decl", err);
      }
    }
  }

  void check_type_ref(const TypeRef& type, const SourcePos& pos) {
    static const std::set<std::string> kReservedPrims = {
        "entity", "object", "agent", "agent-group", "world", "event", "obs-type"};
    if (type.is_either()) require(":typing", pos, "an (either ...) type");
    for (const auto& prim : type.primitives) {
      if (!out_.types.known(prim))
        error(pos, "unknown-type", "unknown type '" + prim + "'");
      else if (!kReservedPrims.count(prim))
        require(":typing", pos, "the declared type '" + prim + "'");
    }
  }

  void add_entity(const std::string& name, const std::string& prim, const SourcePos& pos,
                  const std::string& expected_root) {
    if (!out_.types.known(prim)) {
      error(pos, "unknown-type", "unknown type '" + prim + "' for '" + name + "'");
      return;
    }
    if (!out_.types.compatible(prim, expected_root))
      error(pos, "bad-entity-type",
            "'" + name + "' must have a type compatible with " + expected_root + ", got '" +
                prim + "'");
    auto it = out_.entity_type.find(name);
    if (it != out_.entity_type.end()) {
      if (it->second != prim)
        error(pos, "duplicate-entity",
              "entity '" + name + "' is declared twice with different types");
      return;  // union semantics: repeated identical declarations collapse
    }
    out_.entity_type[name] = prim;
    out_.entity_order.push_back(name);
  }

  void build_entities() {
    for (const auto& decl : out_.spec.domain.constants)
      for (const auto& entry : decl) {
        std::string prim = entry.type ? entry.type->primitives.front() : "object";
        if (entry.type) check_type_ref(*entry.type, entry.pos);
        if (entry.type && entry.type->is_either())
          error(entry.pos, "bad-entity-type", "entities take primitive types, not (either ...)");
        add_entity(entry.name, prim, entry.pos, "entity");
        // Constants typed as agents join the agent language.
        if (out_.types.known(prim) && out_.types.compatible(prim, "agent") &&
            !std::count(out_.agents.begin(), out_.agents.end(), entry.name))
          out_.agents.push_back(entry.name);
      }
    for (const auto& decl : out_.spec.problem.objects)
      for (const auto& entry : decl) {
        std::string prim = entry.type ? entry.type->primitives.front() : "object";
        if (entry.type) check_type_ref(*entry.type, entry.pos);
        add_entity(entry.name, prim, entry.pos, "object");
      }
    for (const auto& decl : out_.spec.problem.agents)
      for (const auto& entry : decl) {
        std::string prim = entry.type ? entry.type->primitives.front() : "agent";
        if (entry.type) check_type_ref(*entry.type, entry.pos);
        add_entity(entry.name, prim, entry.pos, "agent");
        if (!std::count(out_.agents.begin(), out_.agents.end(), entry.name))
          out_.agents.push_back(entry.name);
      }
    if (out_.agents.empty())
      error(out_.spec.problem.pos, "no-agents", "a problem must declare at least one agent");
  }

  void build_groups() {
    if (!out_.spec.problem.groups.empty())
      require(":agent-groups", out_.spec.problem.pos, "an ':agent-groups' declaration");
    // Register names first so groups may reference each other.
    for (const auto& decl : out_.spec.problem.groups)
      for (const auto& group : decl) {
        std::string prim = group.type.value_or("agent-group");
        if (out_.group_members.count(group.name))
          error(group.pos, "duplicate-group",
                "agent group '" + group.name + "' is declared twice");
        add_entity(group.name, prim, group.pos, "agent-group");
        out_.group_members[group.name];  // reserve
      }
  }

  void check_groups() {
    for (const auto& decl : out_.spec.problem.groups)
      for (const auto& group : decl) check_group_members(group);
  }

  void collect_group_terms(const ListNode<TermTuple>& node,
                           std::vector<std::pair<std::string, SourcePos>>& terms) {
    using Node = ListNode<TermTuple>;
    switch (node.kind) {
      case Node::Kind::Item:
        for (const auto& t : node.item.terms) terms.push_back({t, node.item.pos});
        break;
      case Node::Kind::Concat:
        for (const auto& part : node.parts) collect_group_terms(part, terms);
        break;
      case Node::Kind::Forall:
        if (node.params->condition) {
          require(":list-comprehensions", node.params->pos, "a list comprehension");
          push_scope(node.params->vars);
          check_formula(node.params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        for (const auto& v : node.params->vars) check_type_ref(v.type, v.pos);
        require(":lists", node.pos, "a ':forall' list");
        push_scope(node.params->vars);
        collect_group_terms(*node.body, terms);
        pop_scope();
        break;
    }
    if (node.kind == Node::Kind::Concat && !node.parts.empty())
      require(":lists", node.pos, "an ':and' list");
  }

  void check_group_members(const AgentGroupDecl& group) {
    std::vector<std::pair<std::string, SourcePos>> terms;
    collect_group_terms(group.members, terms);
    for (const auto& [term, pos] : terms) {
      if (!term.empty() && term[0] == '?') continue;  // bound by a list :forall
      auto it = out_.entity_type.find(term);
      if (it == out_.entity_type.end()) {
        error(pos, "unknown-entity", "unknown agent or group '" + term + "' in group '" +
                                         group.name + "'");
        continue;
      }
      if (!out_.types.compatible(it->second, "agent") &&
          !out_.types.compatible(it->second, "agent-group"))
        error(pos, "bad-group-member",
              "'" + term + "' in group '" + group.name + "' is neither agent nor agent group");
    }
    // Cycle detection over the static name references.
    std::set<std::string> visiting, done;
    std::function<bool(const std::string&)> dfs = [&](const std::string& name) -> bool {
      if (done.count(name)) return true;
      if (!visiting.insert(name).second) return false;
      for (const auto& decl : out_.spec.problem.groups)
        for (const auto& g : decl)
          if (g.name == name) {
            std::vector<std::pair<std::string, SourcePos>> member_terms;
            collect_group_terms(g.members, member_terms);
            for (const auto& [term, pos] : member_terms) {
              (void)pos;
              if (out_.group_members.count(term) && !dfs(term)) return false;
            }
          }
      visiting.erase(name);
      done.insert(name);
      return true;
    };
    if (!dfs(group.name))
      error(group.pos, "cyclic-group", "agent group '" + group.name + "' references itself");
  }

  void build_predicates() {
    for (const auto& pred : out_.spec.domain.predicates) {
      if (pred.is_fact) require(":facts", pred.pos, "a ':fact' predicate declaration");
      if (out_.predicates.count(pred.name)) {
        error(pred.pos, "duplicate-predicate", "predicate '" + pred.name + "' declared twice");
        continue;
      }
      PredicateInfo info;
      info.name = pred.name;
      info.is_fact = pred.is_fact;
      for (const auto& v : pred.params) {
        check_type_ref(v.type, v.pos);
        info.param_types.push_back(v.type);
      }
      out_.predicate_order.push_back(pred.name);
      out_.predicates[pred.name] = std::move(info);
    }
  }

  void build_facts() {
    if (out_.spec.problem.facts_inits.size() > 1)
      error(out_.spec.problem.pos, "duplicate-facts-init",
            "at most one ':facts-init' declaration is allowed");
    if (!out_.spec.problem.facts_inits.empty())
      require(":facts", out_.spec.problem.pos, "a ':facts-init' declaration");
    for (const auto& decl : out_.spec.problem.facts_inits)
      for (const auto& pred : decl) {
        const PredicateInfo* info = check_pred_ref(pred);
        if (info && !info->is_fact)
          error(pred.pos, "not-a-fact",
                "':facts-init' may only initialize fact predicates, got '" + pred.name + "'");
        for (const auto& arg : pred.args)
          if (!arg.empty() && arg[0] == '?')
            error(pred.pos, "not-ground", "':facts-init' entries must be ground");
        out_.facts_true.insert(make_atom_name(pred.name, pred.args));
      }
  }

  /// Computes the member agents of every declared group: list expansion of
  /// the declaration, with group references expanded by name.
  void expand_groups() {
    if (out_.spec.problem.groups.empty()) return;
    EntityTable table;
    table.types = &out_.types;
    table.order = out_.entity_order;
    table.type_of = out_.entity_type;
    GroundContext ctx(out_, std::move(table));

    std::map<std::string, const AgentGroupDecl*> decls;
    for (const auto& decl : out_.spec.problem.groups)
      for (const auto& group : decl) decls[group.name] = &group;

    std::map<std::string, std::vector<AgentId>> expanded;
    std::set<std::string> visiting;
    std::function<std::vector<AgentId>(const std::string&)> members =
        [&](const std::string& name) -> std::vector<AgentId> {
      auto done = expanded.find(name);
      if (done != expanded.end()) return done->second;
      if (!visiting.insert(name).second) return {};  // cycle, reported elsewhere
      std::vector<AgentId> out;
      std::set<AgentId> seen;
      auto add = [&](const AgentId& agent) {
        if (seen.insert(agent).second) out.push_back(agent);
      };
      try {
        auto tuples = ctx.expand_list<TermTuple, std::vector<std::string>>(
            decls.at(name)->members, {}, [&](const TermTuple& tuple, const Binding& b) {
              std::vector<std::string> resolved;
              for (const auto& t : tuple.terms) resolved.push_back(ctx.resolve_term(t, b));
              return resolved;
            });
        for (const auto& tuple : tuples)
          for (const auto& term : tuple) {
            if (decls.count(term)) {
              for (const auto& agent : members(term)) add(agent);
            } else {
              add(term);
            }
          }
      } catch (const EpddlError& e) {
        error(decls.at(name)->pos, "bad-group-expansion",
              "cannot expand agent group '" + name + "': " + e.what());
      }
      visiting.erase(name);
      expanded[name] = out;
      return out;
    };
    for (const auto& [name, decl] : decls) {
      (void)decl;
      out_.group_members[name] = members(name);
    }
  }

  const PredicateInfo* check_pred_ref(const PredRef& pred) {
    auto it = out_.predicates.find(pred.name);
    if (it == out_.predicates.end()) {
      error(pred.pos, "unknown-predicate", "unknown predicate '" + pred.name + "'");
      return nullptr;
    }
    const PredicateInfo& info = it->second;
    if (info.param_types.size() != pred.args.size()) {
      error(pred.pos, "bad-arity",
            "predicate '" + pred.name + "' takes " + std::to_string(info.param_types.size()) +
                " arguments, got " + std::to_string(pred.args.size()));
      return &info;
    }
    for (std::size_t i = 0; i < pred.args.size(); ++i) {
      auto type = term_type(pred.args[i], pred.pos);
      if (type && !out_.types.compatible(*type, info.param_types[i]))
        error(pred.pos, "incompatible-type",
              "argument " + std::to_string(i + 1) + " of '" + pred.name +
                  "' has an incompatible type");
    }
    return &info;
  }

  void index_events_and_types() {
    for (std::size_t i = 0; i < out_.spec.domain.events.size(); ++i) {
      const auto& event = out_.spec.domain.events[i];
      if (!out_.event_index.emplace(event.name, i).second)
        error(event.pos, "duplicate-event", "event '" + event.name + "' declared twice");
    }
    out_.action_types["basic"] = make_basic_type();
    for (const auto& lib : out_.spec.libraries) {
      bool imported = std::count(out_.spec.domain.libraries.begin(),
                                 out_.spec.domain.libraries.end(), lib.name) > 0;
      if (!imported) continue;
      for (const auto& type : lib.action_types) {
        if (!out_.action_types.emplace(type.name, type).second)
          error(type.pos, "duplicate-action-type",
                "action type '" + type.name + "' declared twice");
      }
    }
    if (!out_.spec.domain.libraries.empty())
      require(":partial-observability", out_.spec.domain.pos,
              "an ':action-type-libraries' declaration");
  }

  void check_action_types() {
    for (const auto& [name, type] : out_.action_types) {
      if (name == "basic") continue;
      std::set<std::string> vars(type.event_vars.begin(), type.event_vars.end());
      if (vars.size() != type.event_vars.size())
        error(type.pos, "duplicate-event-variable", "duplicate event variable in '" + name + "'");
      std::set<std::string> obs(type.obs_types.begin(), type.obs_types.end());
      if (obs.size() != type.obs_types.size())
        error(type.pos, "duplicate-obs-type", "duplicate observability type in '" + name + "'");
      for (const auto& rel : type.relations) {
        if (!obs.count(rel.name))
          error(rel.pos, "unknown-obs-type",
                "relation for unknown observability type '" + rel.name + "' in '" + name + "'");
        check_event_var_list(rel.pairs, vars, name);
      }
      for (const auto& d : type.designated_vars)
        if (!vars.count(d))
          error(type.pos, "unknown-event-variable",
                "designated event variable '" + d + "' is not declared in '" + name + "'");
      if (!type.conditions.empty())
        require(":events-conditions", type.pos, "a ':conditions' declaration");
      static const std::set<std::string> kCondKeys = {
          ":propositional-precondition", ":propositional-postconditions", ":propositional-event",
          ":trivial-precondition",       ":trivial-postconditions",       ":trivial-event",
          ":non-trivial-precondition",   ":non-trivial-postconditions",   ":non-trivial-event"};
      for (const auto& cond : type.conditions) {
        if (!vars.count(cond.var))
          error(cond.pos, "unknown-event-variable",
                "condition for unknown event variable '" + cond.var + "' in '" + name + "'");
        for (const auto& key : cond.keys)
          if (!kCondKeys.count(key))
            error(cond.pos, "unknown-event-condition", "unknown event condition '" + key + "'");
      }
    }
  }

  void check_event_var_list(const ListNode<TermPair>& node, const std::set<std::string>& vars,
                            const std::string& type_name) {
    using Node = ListNode<TermPair>;
    switch (node.kind) {
      case Node::Kind::Item:
        for (const auto& term : {node.item.a, node.item.b})
          if (term.empty() || term[0] != '?' || (!vars.count(term) && !lookup_var(term)))
            error(node.item.pos, "unknown-event-variable",
                  "'" + term + "' is not an event variable of '" + type_name + "'");
        break;
      case Node::Kind::Concat:
        require(":lists", node.pos, "an ':and' list");
        for (const auto& part : node.parts) check_event_var_list(part, vars, type_name);
        break;
      case Node::Kind::Forall: {
        require(":lists", node.pos, "a ':forall' list");
        for (const auto& v : node.params->vars)
          for (const auto& prim : v.type.primitives)
            if (prim != "event")
              error(v.pos, "bad-quantifier-type",
                    "event-relation quantifiers range over type event");
        push_scope(node.params->vars);
        check_event_var_list(*node.body, vars, type_name);
        pop_scope();
        break;
      }
    }
  }

  // --- formulas ---

  bool expr_has_modality(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Modal) return true;
    for (const auto& c : e->children)
      if (expr_has_modality(c)) return true;
    if (e->params && e->params->condition && expr_has_modality(e->params->condition))
      return true;
    return false;
  }

  void collect_predicates(const ExprPtr& e, std::set<std::string>& names) {
    if (e->kind == Expr::Kind::Pred) names.insert(e->pred_name);
    for (const auto& c : e->children) collect_predicates(c, names);
    if (e->params && e->params->condition) collect_predicates(e->params->condition, names);
  }

  void check_formula(const ExprPtr& e, const FormulaContext& ctx) {
    switch (e->kind) {
      case Expr::Kind::True:
      case Expr::Kind::False:
        if (ctx.theory_body)
          error(e->pos, "bad-theory-formula",
                "(true)/(false) cannot occur in finitary S5-theory formulas");
        return;
      case Expr::Kind::Eq:
      case Expr::Kind::Neq: {
        if (ctx.theory_body)
          error(e->pos, "bad-theory-formula",
                "equalities cannot occur in finitary S5-theory formulas");
        require(":equality", e->pos, "an (in)equality atom");
        for (const auto& t : e->args) term_type(t, e->pos);
        return;
      }
      case Expr::Kind::Pred: {
        const PredicateInfo* info = check_pred_ref(PredRef{e->pred_name, e->args, e->pos});
        if (ctx.list_formula && info && !info->is_fact)
          error(e->pos, "non-fact-in-list-formula",
                "list-comprehension conditions may mention only facts, got '" + e->pred_name +
                    "'");
        return;
      }
      case Expr::Kind::Not:
        if (!ctx.theory_body)
          require(":negative-" + ctx.suffix, e->pos, "a negated formula");
        check_formula(e->children[0], ctx);
        return;
      case Expr::Kind::And:
        for (const auto& c : e->children) check_formula(c, ctx);
        return;
      case Expr::Kind::Or:
        if (!ctx.theory_body)
          require(":disjunctive-" + ctx.suffix, e->pos, "a disjunction");
        for (const auto& c : e->children) check_formula(c, ctx);
        return;
      case Expr::Kind::Imply:
        if (!ctx.theory_body)
          require(":disjunctive-" + ctx.suffix, e->pos, "an implication");
        check_formula(e->children[0], ctx);
        check_formula(e->children[1], ctx);
        return;
      case Expr::Kind::Forall:
      case Expr::Kind::Exists: {
        if (!ctx.theory_body) {
          const char* which = e->kind == Expr::Kind::Forall ? ":universal-" : ":existential-";
          require(which + ctx.suffix, e->pos, "a quantified formula");
        }
        for (const auto& v : e->params->vars) check_type_ref(v.type, v.pos);
        if (e->params->condition) {
          require(":list-comprehensions", e->params->pos, "a list comprehension");
          push_scope(e->params->vars);
          check_formula(e->params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        push_scope(e->params->vars);
        check_formula(e->children[0], ctx);
        pop_scope();
        return;
      }
      case Expr::Kind::Modal:
        break;
    }
    // Modalities.
    if (ctx.list_formula) {
      error(e->pos, "modality-in-list-formula",
            "modalities are not allowed in list-comprehension conditions");
      return;
    }
    if (ctx.theory_body) {
      error(e->pos, "bad-theory-formula",
            "the propositional part of a finitary S5-theory formula cannot contain modalities");
      return;
    }
    require(":modal-" + ctx.suffix, e->pos, "a modal formula");
    check_modal_index(e);
    if (e->mname == Expr::MName::Kw) require(":knowing-whether", e->pos, "a 'Kw.' modality");
    if (e->mname == Expr::MName::C) {
      std::set<std::string> names;
      collect_predicates(e->children[0], names);
      bool is_static = true;
      for (const auto& n : names) {
        auto it = out_.predicates.find(n);
        if (it == out_.predicates.end() || !it->second.is_fact) is_static = false;
      }
      if (is_static) {
        if (!has(":static-common-knowledge") && !has(":common-knowledge"))
          error(e->pos, "missing-requirement",
                "a 'C.' modality requires :common-knowledge or :static-common-knowledge");
      } else {
        require(":common-knowledge", e->pos, "a 'C.' modality over non-fact predicates");
      }
    }
    check_formula(e->children[0], ctx);
  }

  void check_modal_index(const ExprPtr& e) {
    const ModalIndex& index = e->mindex;
    bool group = false;
    switch (index.kind) {
      case ModalIndex::Kind::All:
        require(":group-modalities", e->pos, "the 'All' modality index");
        group = true;
        break;
      case ModalIndex::Kind::List: {
        require(":group-modalities", e->pos, "an agent-group modality index");
        std::vector<std::pair<std::string, SourcePos>> terms;
        collect_group_terms(*index.list, terms);
        for (const auto& [term, pos] : terms) {
          if (!term.empty() && term[0] == '?') continue;
          auto type = term_type(term, pos);
          if (type && !out_.types.compatible(*type, TypeRef{{"agent"}, {}}) &&
              !out_.types.compatible(*type, TypeRef{{"agent-group"}, {}}))
            error(pos, "bad-modal-index", "'" + term + "' is neither agent nor agent group");
        }
        group = true;
        break;
      }
      case ModalIndex::Kind::Term: {
        auto type = term_type(index.term, e->pos);
        if (type && term_is_group(index.term)) {
          require(":group-modalities", e->pos, "an agent-group modality index");
          group = true;
        } else if (type && !out_.types.compatible(*type, TypeRef{{"agent"}, {}})) {
          error(e->pos, "bad-modal-index",
                "modality index '" + index.term + "' is not an agent");
        }
        break;
      }
    }
    if (e->mname == Expr::MName::C && !group)
      error(e->pos, "bad-modal-index", "'C.' modalities take a group index");
  }

  // --- events and actions ---

  bool event_pre_trivial(const EventDecl& event) {
    return !event.precondition || event.precondition->kind == Expr::Kind::True;
  }

  bool event_post_trivial(const EventDecl& event) {
    if (!event.effects) return true;
    return event.effects->kind == ListNode<CondEffect>::Kind::Concat &&
           event.effects->parts.empty();
  }

  void check_effect_list(const ListNode<CondEffect>& node) {
    using Node = ListNode<CondEffect>;
    switch (node.kind) {
      case Node::Kind::Item:
        check_cond_effect(node.item);
        break;
      case Node::Kind::Concat:
        if (!node.parts.empty()) require(":lists", node.pos, "an ':and' list");
        for (const auto& part : node.parts) check_effect_list(part);
        break;
      case Node::Kind::Forall:
        require(":lists", node.pos, "a ':forall' list");
        for (const auto& v : node.params->vars) check_type_ref(v.type, v.pos);
        if (node.params->condition) {
          require(":list-comprehensions", node.params->pos, "a list comprehension");
          push_scope(node.params->vars);
          check_formula(node.params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        push_scope(node.params->vars);
        check_effect_list(*node.body);
        pop_scope();
        break;
    }
  }

  void check_literal(const Literal& literal) {
    const PredicateInfo* info = check_pred_ref(literal.pred);
    if (info && info->is_fact)
      error(literal.pos, "fact-in-effects",
            "facts are static; '" + literal.pred.name + "' cannot appear in effects");
  }

  void check_literal_list(const ListNode<Literal>& node) {
    using Node = ListNode<Literal>;
    switch (node.kind) {
      case Node::Kind::Item:
        check_literal(node.item);
        break;
      case Node::Kind::Concat:
        if (!node.parts.empty()) require(":lists", node.pos, "an ':and' list");
        for (const auto& part : node.parts) check_literal_list(part);
        break;
      case Node::Kind::Forall:
        require(":lists", node.pos, "a ':forall' list");
        for (const auto& v : node.params->vars) check_type_ref(v.type, v.pos);
        if (node.params->condition) {
          require(":list-comprehensions", node.params->pos, "a list comprehension");
          push_scope(node.params->vars);
          check_formula(node.params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        push_scope(node.params->vars);
        check_literal_list(*node.body);
        pop_scope();
        break;
    }
  }

  void check_cond_effect(const CondEffect& effect) {
    switch (effect.kind) {
      case CondEffect::Kind::Literal:
        check_literal(effect.literal);
        break;
      case CondEffect::Kind::When:
      case CondEffect::Kind::Iff:
        require(":conditional-effects", effect.pos, "a conditional effect");
        check_formula(effect.condition, {"postconditions", false, false});
        check_literal_list(*effect.literals);
        break;
    }
  }

  void check_events() {
    for (const auto& event : out_.spec.domain.events) {
      for (const auto& v : event.params) check_type_ref(v.type, v.pos);
      push_scope(event.params);
      if (event.precondition)
        check_formula(event.precondition, {"preconditions", false, false});
      if (event.effects && !event_post_trivial(event)) {
        require(":ontic-actions", event.pos, "a non-empty ':effects' declaration");
        check_effect_list(*event.effects);
      }
      pop_scope();
    }
  }

  void check_actions() {
    std::set<std::string> action_names;
    for (const auto& action : out_.spec.domain.actions) {
      if (!action_names.insert(action.name).second)
        error(action.pos, "duplicate-action", "action '" + action.name + "' declared twice");

      for (const auto& v : action.params.vars) check_type_ref(v.type, v.pos);
      if (action.params.condition) {
        require(":list-comprehensions", action.params.pos, "a list comprehension");
        push_scope(action.params.vars);
        check_formula(action.params.condition, {"list-formulas", true, false});
        pop_scope();
      }

      auto type_it = out_.action_types.find(action.type_name);
      if (action.type_name != "basic")
        require(":partial-observability", action.type_pos,
                "the non-basic action type '" + action.type_name + "'");
      if (type_it == out_.action_types.end()) {
        error(action.type_pos, "unknown-action-type",
              "unknown action type '" + action.type_name + "'");
        continue;
      }
      const ActionTypeDecl& type = type_it->second;

      if (action.events.size() != type.event_vars.size())
        error(action.type_pos, "bad-event-binding",
              "action '" + action.name + "' binds " + std::to_string(action.events.size()) +
                  " events but type '" + type.name + "' declares " +
                  std::to_string(type.event_vars.size()) + " event variables");

      push_scope(action.params.vars);
      for (std::size_t k = 0; k < action.events.size(); ++k) {
        const ActionEventRef& ref = action.events[k];
        auto event_it = out_.event_index.find(ref.name);
        if (event_it == out_.event_index.end()) {
          error(ref.pos, "unknown-event", "unknown event '" + ref.name + "'");
          continue;
        }
        const EventDecl& event = out_.spec.domain.events[event_it->second];
        if (event.params.size() != ref.args.size()) {
          error(ref.pos, "bad-arity",
                "event '" + ref.name + "' takes " + std::to_string(event.params.size()) +
                    " arguments, got " + std::to_string(ref.args.size()));
          continue;
        }
        for (std::size_t i = 0; i < ref.args.size(); ++i) {
          auto type_of_arg = term_type(ref.args[i], ref.pos);
          if (type_of_arg && !out_.types.compatible(*type_of_arg, event.params[i].type))
            error(ref.pos, "incompatible-type",
                  "argument " + std::to_string(i + 1) + " of event '" + ref.name +
                      "' has an incompatible type");
        }
        if (k < type.event_vars.size())
          check_event_conditions(action, type, type.event_vars[k], event, ref.pos);
      }
      if (action.obs) {
        require(":partial-observability", action.pos, "observability conditions");
        check_obs_list(*action.obs, type);
      }
      check_obs_rules(action, type);
      pop_scope();
    }
  }

  void check_event_conditions(const ActionDecl& action, const ActionTypeDecl& type,
                              const std::string& event_var, const EventDecl& event,
                              const SourcePos& pos) {
    for (const auto& cond : type.conditions) {
      if (cond.var != event_var) continue;
      for (const auto& key : cond.keys) {
        bool ok = true;
        std::string reason;
        bool pre_trivial = event_pre_trivial(event);
        bool post_trivial = event_post_trivial(event);
        bool pre_prop = !event.precondition || !expr_has_modality(event.precondition);
        bool post_prop = effects_propositional(event);
        if (key == ":trivial-precondition") ok = pre_trivial, reason = "a trivial precondition";
        else if (key == ":trivial-postconditions") ok = post_trivial, reason = "trivial postconditions";
        else if (key == ":trivial-event") ok = pre_trivial && post_trivial, reason = "a trivial event";
        else if (key == ":non-trivial-precondition") ok = !pre_trivial, reason = "a non-trivial precondition";
        else if (key == ":non-trivial-postconditions") ok = !post_trivial, reason = "non-trivial postconditions";
        else if (key == ":non-trivial-event") ok = !(pre_trivial && post_trivial), reason = "a non-trivial event";
        else if (key == ":propositional-precondition") ok = pre_prop, reason = "a propositional precondition";
        else if (key == ":propositional-postconditions") ok = post_prop, reason = "propositional postconditions";
        else if (key == ":propositional-event") ok = pre_prop && post_prop, reason = "a propositional event";
        if (!ok)
          error(pos, "event-condition-violated",
                "action '" + action.name + "' binds event '" + event.name + "' to '" +
                    event_var + "' of type '" + type.name + "', which requires " + reason +
                    " (" + key + ")");
      }
    }
  }

  bool effects_propositional(const EventDecl& event) {
    if (!event.effects) return true;
    bool prop = true;
    std::function<void(const ListNode<CondEffect>&)> walk =
        [&](const ListNode<CondEffect>& node) {
          using Node = ListNode<CondEffect>;
          switch (node.kind) {
            case Node::Kind::Item:
              if (node.item.kind != CondEffect::Kind::Literal &&
                  expr_has_modality(node.item.condition))
                prop = false;
              break;
            case Node::Kind::Concat:
              for (const auto& part : node.parts) walk(part);
              break;
            case Node::Kind::Forall:
              walk(*node.body);
              break;
          }
        };
    walk(*event.effects);
    return prop;
  }

  void check_obs_list(const ListNode<ObsCond>& node, const ActionTypeDecl& type) {
    using Node = ListNode<ObsCond>;
    switch (node.kind) {
      case Node::Kind::Item: {
        const ObsCond& cond = node.item;
        std::set<std::string> obs(type.obs_types.begin(), type.obs_types.end());
        auto check_type_name = [&](const std::string& t, const SourcePos& pos) {
          if (!obs.count(t))
            error(pos, "unknown-obs-type",
                  "observability type '" + t + "' is not declared by type '" + type.name + "'");
        };
        switch (cond.kind) {
          case ObsCond::Kind::Default:
            check_type_name(cond.type_name, cond.pos);
            break;
          case ObsCond::Kind::Static:
            term_type(cond.term, cond.pos);
            check_type_name(cond.type_name, cond.pos);
            break;
          case ObsCond::Kind::IfThenElse:
            term_type(cond.term, cond.pos);
            for (const auto& branch : cond.branches) {
              check_formula(branch.condition, {"obs-conditions", false, false});
              check_type_name(branch.type_name, cond.pos);
            }
            if (cond.else_type) check_type_name(*cond.else_type, cond.pos);
            break;
        }
        break;
      }
      case Node::Kind::Concat:
        if (!node.parts.empty()) require(":lists", node.pos, "an ':and' list");
        for (const auto& part : node.parts) check_obs_list(part, type);
        break;
      case Node::Kind::Forall:
        require(":lists", node.pos, "a ':forall' list");
        for (const auto& v : node.params->vars) check_type_ref(v.type, v.pos);
        if (node.params->condition) {
          require(":list-comprehensions", node.params->pos, "a list comprehension");
          push_scope(node.params->vars);
          check_formula(node.params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        push_scope(node.params->vars);
        check_obs_list(*node.body, type);
        pop_scope();
        break;
    }
  }

  std::string ground_obs_key(const GroundContext& ctx, const ObsCond& cond, const Binding& b) {
    switch (cond.kind) {
      case ObsCond::Kind::Default:
        return "default|" + cond.type_name;
      case ObsCond::Kind::Static:
        return ctx.resolve_term(cond.term, b) + "|static|" + cond.type_name;
      case ObsCond::Kind::IfThenElse: {
        std::string key = ctx.resolve_term(cond.term, b) + "|ite";
        for (const auto& branch : cond.branches)
          key += "|" + ctx.translate(branch.condition, b)->to_string() + ">" + branch.type_name;
        if (cond.else_type)
          key += "|else>" + *cond.else_type;
        else
          key += "|if-no-else";
        return key;
      }
    }
    return "";
  }

  /// Rules 1-4 on observability conditions, evaluated per ground instance.
  void check_obs_rules(const ActionDecl& action, const ActionTypeDecl& type) {
    EntityTable table;
    table.types = &out_.types;
    table.order = out_.entity_order;
    table.type_of = out_.entity_type;
    table.groups = out_.group_members;
    GroundContext ctx(out_, std::move(table));
    ctx.obs_type_scope = type.obs_types;

    // No conditions with a single observability type: everyone gets that type.
    if (!action.obs && type.obs_types.size() == 1) return;

    std::set<std::string> reported;
    auto report_once = [&](const std::string& rule, const std::string& message) {
      if (reported.insert(rule + "|" + message).second) error(action.pos, rule, message);
    };

    std::vector<std::vector<std::string>> tuples;
    try {
      tuples = ctx.induced_power_set(action.params, {});
    } catch (const EpddlError&) {
      return;  // earlier diagnostics explain the failure
    }
    for (const auto& tuple : tuples) {
      Binding binding;
      for (std::size_t i = 0; i < action.params.vars.size() && i < tuple.size(); ++i)
        binding[action.params.vars[i].var] = tuple[i];

      struct Entry { std::string key; std::string agent; bool if_without_else; };
      std::vector<Entry> entries;
      int defaults = 0;
      bool expansion_failed = false;
      if (action.obs) {
        try {
          // Key = the fully ground entry; listExp set semantics deduplicates
          // repeated identical conditions.
          auto grounded = ctx.expand_list<ObsCond, std::string>(
              *action.obs, binding,
              [&](const ObsCond& cond, const Binding& b) { return ground_obs_key(ctx, cond, b); });
          for (const auto& key : grounded) {
            if (key.rfind("default|", 0) == 0) {
              ++defaults;
              continue;
            }
            std::string subject = key.substr(0, key.find('|'));
            bool if_without_else = key.rfind("|if-no-else") != std::string::npos;
            if (out_.group_members.count(subject)) {
              for (const auto& member : out_.group_members.at(subject))
                entries.push_back({key, member, if_without_else});
            } else {
              entries.push_back({key, subject, if_without_else});
            }
          }
        } catch (const EpddlError&) {
          expansion_failed = true;
        }
      }
      if (expansion_failed) continue;

      if (defaults > 1)
        report_once("multiple-defaults", "action '" + action.name +
                                             "' declares more than one default observability "
                                             "condition (rule 4)");
      std::map<std::string, int> per_agent;
      for (const auto& entry : entries) ++per_agent[entry.agent];
      for (const auto& [agent, count] : per_agent)
        if (count > 1)
          report_once("multiple-obs-conditions",
                      "action '" + action.name + "' declares " + std::to_string(count) +
                          " observability conditions for agent '" + agent + "' (rule 2)");
      for (const auto& agent : out_.agents)
        if (!per_agent.count(agent) && defaults == 0)
          report_once("missing-obs-condition",
                      "action '" + action.name + "' has no observability condition for agent '" +
                          agent + "' and no default (rule 1)");
      for (const auto& entry : entries)
        if (entry.if_without_else && defaults == 0)
          report_once("missing-else",
                      "an if-then-else observability condition of action '" + action.name +
                          "' has no 'else' branch and no default exists (rule 3)");
    }
  }

  // --- init and goal ---

  void check_init() {
    if (out_.spec.problem.inits.empty()) {
      error(out_.spec.problem.pos, "missing-init",
            "a problem must declare exactly one initial state");
      return;
    }
    const Init& init = out_.spec.problem.inits.front();
    if (init.explicit_state) {
      const InitExplicit& state = *init.explicit_state;
      std::set<std::string> worlds(state.worlds.begin(), state.worlds.end());
      if (worlds.size() != state.worlds.size())
        error(state.pos, "duplicate-world", "duplicate world name in ':worlds'");
      if (state.designated.size() > 1)
        require(":multi-pointed-models", state.pos, "multiple designated worlds");
      for (const auto& rel : state.relations) {
        if (!std::count(out_.agents.begin(), out_.agents.end(), rel.name))
          error(rel.pos, "unknown-agent",
                "accessibility relation for unknown agent '" + rel.name + "'");
        check_world_pair_list(rel.pairs);
      }
      for (const auto& label : state.labels) check_label(label, worlds);
    } else {
      require(":finitary-S5-theories", init.pos, "a finitary S5-theory initial state");
      check_theory_list(init.theory->formulas);
    }
  }

  void check_world_pair_list(const ListNode<TermPair>& node) {
    using Node = ListNode<TermPair>;
    switch (node.kind) {
      case Node::Kind::Item:
        // World names are resolved by the grounder after expansion.
        for (const auto& term : {node.item.a, node.item.b})
          if (!term.empty() && term[0] == '?' && !lookup_var(term))
            error(node.item.pos, "unbound-variable", "variable '" + term + "' is not bound");
        break;
      case Node::Kind::Concat:
        if (!node.parts.empty()) require(":lists", node.pos, "an ':and' list");
        for (const auto& part : node.parts) check_world_pair_list(part);
        break;
      case Node::Kind::Forall:
        require(":lists", node.pos, "a ':forall' list");
        for (const auto& v : node.params->vars)
          for (const auto& prim : v.type.primitives)
            if (prim != "world")
              error(v.pos, "bad-quantifier-type",
                    "world-relation quantifiers range over type world");
        if (node.params->condition) {
          require(":list-comprehensions", node.params->pos, "a list comprehension");
          push_scope(node.params->vars);
          check_formula(node.params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        push_scope(node.params->vars);
        check_world_pair_list(*node.body);
        pop_scope();
        break;
    }
  }

  void check_label(const WorldLabelDecl& label, const std::set<std::string>& worlds) {
    if (!worlds.count(label.world))
      error(label.pos, "unknown-world", "label for undeclared world '" + label.world + "'");
    std::function<void(const ListNode<PredRef>&)> walk = [&](const ListNode<PredRef>& node) {
      using Node = ListNode<PredRef>;
      switch (node.kind) {
        case Node::Kind::Item: {
          const PredicateInfo* info = check_pred_ref(node.item);
          if (info && info->is_fact)
            error(node.item.pos, "fact-in-label",
                  "facts are initialized in ':facts-init', not in world labels");
          break;
        }
        case Node::Kind::Concat:
          if (!node.parts.empty()) require(":lists", node.pos, "an ':and' list");
          for (const auto& part : node.parts) walk(part);
          break;
        case Node::Kind::Forall:
          require(":lists", node.pos, "a ':forall' list");
          for (const auto& v : node.params->vars) check_type_ref(v.type, v.pos);
          if (node.params->condition) {
            require(":list-comprehensions", node.params->pos, "a list comprehension");
            push_scope(node.params->vars);
            check_formula(node.params->condition, {"list-formulas", true, false});
            pop_scope();
          }
          push_scope(node.params->vars);
          walk(*node.body);
          pop_scope();
          break;
      }
    };
    walk(label.preds);
  }

  void check_theory_list(const ListNode<TheoryFormula>& node) {
    using Node = ListNode<TheoryFormula>;
    switch (node.kind) {
      case Node::Kind::Item: {
        const TheoryFormula& t = node.item;
        if (!t.agent_term.empty()) {
          auto type = term_type(t.agent_term, t.pos);
          if (type && !out_.types.compatible(*type, TypeRef{{"agent"}, {}}))
            error(t.pos, "bad-modal-index",
                  "'" + t.agent_term + "' in a finitary S5-theory formula is not an agent");
        }
        check_formula(t.prop, {"", false, true});
        break;
      }
      case Node::Kind::Concat:
        for (const auto& part : node.parts) check_theory_list(part);
        break;
      case Node::Kind::Forall:
        for (const auto& v : node.params->vars) check_type_ref(v.type, v.pos);
        if (node.params->condition) {
          require(":list-comprehensions", node.params->pos, "a list comprehension");
          push_scope(node.params->vars);
          check_formula(node.params->condition, {"list-formulas", true, false});
          pop_scope();
        }
        push_scope(node.params->vars);
        check_theory_list(*node.body);
        pop_scope();
        break;
    }
  }

  void check_goals() {
    for (const auto& goal : out_.spec.problem.goals)
      check_formula(goal, {"goals", false, false});
  }

  // --- baseline fragment ---

  void baseline_formula(const ExprPtr& e, const SourcePos& pos) {
    if (e->kind == Expr::Kind::And) {
      for (const auto& c : e->children) baseline_formula(c, pos);
      return;
    }
    if (e->kind != Expr::Kind::Pred)
      error(pos, "baseline-violation",
            "under :pal all formulas are conjunctions of positive atoms");
  }

  void check_baseline() {
    if (!baseline_) return;
    for (const auto& goal : out_.spec.problem.goals) baseline_formula(goal, goal->pos);
    for (const auto& event : out_.spec.domain.events)
      if (event.precondition) baseline_formula(event.precondition, event.pos);
    for (const auto& action : out_.spec.domain.actions)
      if (action.type_name != "basic")
        error(action.pos, "baseline-violation",
              "under :pal only the basic action type is available");
    if (!out_.spec.problem.inits.empty() && out_.spec.problem.inits.front().explicit_state) {
      const InitExplicit& state = *out_.spec.problem.inits.front().explicit_state;
      if (state.designated.size() != 1)
        error(state.pos, "baseline-violation", "under :pal the initial state is single-pointed");
      // Relations under :pal are plain singleton lists; check S5 directly.
      EpistemicState s;
      s.agents = out_.agents;
      s.worlds = state.worlds;
      for (const auto& w : state.worlds) s.labels[w];
      bool plain = true;
      for (const auto& rel : state.relations) {
        if (rel.pairs.kind != ListNode<TermPair>::Kind::Item) {
          plain = false;
          continue;
        }
        s.relations[rel.name].insert({rel.pairs.item.a, rel.pairs.item.b});
      }
      s.designated.insert(state.worlds.begin(), state.worlds.end());
      if (plain && !state.worlds.empty()) {
        bool ok = true;
        try {
          s.validate();
          ok = frame_report(s).classification == FrameClass::S5;
        } catch (const EpddlError&) {
          ok = false;
        }
        if (!ok)
          error(state.pos, "baseline-violation",
                "under :pal the initial state must be an S5 model");
      }
    }
  }
};

}  // namespace

TypedSpec type_check(const Spec& spec) {
  Checker checker(spec);
  return checker.run();
}

}  // namespace epddl
