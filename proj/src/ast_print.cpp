#include <sstream>

#include "epddl/parser.hpp"

namespace epddl {

namespace {

using namespace ast;

class Printer {
 public:
  std::string render(const Fragment& fragment) {
    switch (fragment.kind) {
      case Fragment::Kind::Problem: problem(*fragment.problem); break;
      case Fragment::Kind::Domain: domain(*fragment.domain); break;
      case Fragment::Kind::Library: library(*fragment.library); break;
    }
    return out_.str();
  }

 private:
  std::ostringstream out_;

  void put(const std::string& s) { out_ << s; }

  void type_ref(const TypeRef& t) {
    if (t.is_either()) {
      put("(either");
      for (const auto& p : t.primitives) put(" " + p);
      put(")");
    } else {
      put(t.primitives.front());
    }
  }

  void typed_names(const std::vector<TypedName>& names) {
    for (const auto& n : names) {
      put(" " + n.name);
      if (n.type) {
        put(" - ");
        type_ref(*n.type);
      }
    }
  }

  void typed_vars(const std::vector<TypedVar>& vars) {
    bool first = true;
    for (const auto& v : vars) {
      if (!first) put(" ");
      first = false;
      put(v.var + " - ");
      type_ref(v.type);
    }
  }

  void params(const Params& p) {
    put("(");
    typed_vars(p.vars);
    if (p.condition) {
      put(" | ");
      formula(p.condition);
    }
    put(")");
  }

  void modal_index(const ModalIndex& index) {
    switch (index.kind) {
      case ModalIndex::Kind::All: put("All"); break;
      case ModalIndex::Kind::Term: put(index.term); break;
      case ModalIndex::Kind::List:
        list(*index.list, [this](const TermTuple& t) { term_tuple(t); });
        break;
    }
  }

  void term_tuple(const TermTuple& tuple) {
    put("(");
    for (std::size_t i = 0; i < tuple.terms.size(); ++i)
      put((i ? " " : "") + tuple.terms[i]);
    put(")");
  }

  void formula(const ExprPtr& f) {
    put("(");
    switch (f->kind) {
      case Expr::Kind::True: put("true"); break;
      case Expr::Kind::False: put("false"); break;
      case Expr::Kind::Eq:
      case Expr::Kind::Neq:
        put(f->kind == Expr::Kind::Eq ? "=" : "/=");
        put(" " + f->args[0] + " " + f->args[1]);
        break;
      case Expr::Kind::Pred:
        put(f->pred_name);
        for (const auto& a : f->args) put(" " + a);
        break;
      case Expr::Kind::Not:
        put("not ");
        formula(f->children[0]);
        break;
      case Expr::Kind::And:
      case Expr::Kind::Or:
        put(f->kind == Expr::Kind::And ? "and" : "or");
        for (const auto& c : f->children) {
          put(" ");
          formula(c);
        }
        break;
      case Expr::Kind::Imply:
        put("imply ");
        formula(f->children[0]);
        put(" ");
        formula(f->children[1]);
        break;
      case Expr::Kind::Forall:
      case Expr::Kind::Exists:
        put(f->kind == Expr::Kind::Forall ? "forall " : "exists ");
        params(*f->params);
        put(" ");
        formula(f->children[0]);
        break;
      case Expr::Kind::Modal:
        put(f->dual ? "<" : "[");
        if (f->mname == Expr::MName::Kw) put("Kw. ");
        if (f->mname == Expr::MName::C) put("C. ");
        modal_index(f->mindex);
        put(f->dual ? "> " : "] ");
        formula(f->children[0]);
        break;
    }
    put(")");
  }

  template <typename T, typename ItemFn>
  void list(const ListNode<T>& node, ItemFn item) {
    switch (node.kind) {
      case ListNode<T>::Kind::Item:
        item(node.item);
        break;
      case ListNode<T>::Kind::Concat:
        put("(:and");
        for (const auto& part : node.parts) {
          put(" ");
          list(part, item);
        }
        put(")");
        break;
      case ListNode<T>::Kind::Forall:
        put("(:forall ");
        params(*node.params);
        put(" ");
        list(*node.body, item);
        put(")");
        break;
    }
  }

  void pred_ref(const PredRef& p) {
    put("(" + p.name);
    for (const auto& a : p.args) put(" " + a);
    put(")");
  }

  void requirements(const std::vector<RequireDecl>& decls) {
    for (const auto& decl : decls) {
      put("(:requirements");
      for (const auto& k : decl.keys) put(" " + k);
      put(")\n");
    }
  }

  void problem(const Problem& p) {
    put("(define (problem " + p.name + ")\n");
    put("(:domain " + p.domain_ref + ")\n");
    requirements(p.requirements);
    for (const auto& decl : p.objects) {
      put("(:objects");
      typed_names(decl);
      put(")\n");
    }
    for (const auto& decl : p.agents) {
      put("(:agents");
      typed_names(decl);
      put(")\n");
    }
    for (const auto& decl : p.groups) {
      put("(:agent-groups");
      for (const auto& g : decl) {
        put(" (" + g.name);
        if (g.type) put(" - " + *g.type);
        put(" ");
        list(g.members, [this](const TermTuple& t) { term_tuple(t); });
        put(")");
      }
      put(")\n");
    }
    for (const auto& init : p.inits) {
      put("(:init ");
      if (init.explicit_state) {
        const auto& s = *init.explicit_state;
        put(":worlds (");
        for (std::size_t i = 0; i < s.worlds.size(); ++i) put((i ? " " : "") + s.worlds[i]);
        put(") :relations (");
        for (const auto& rel : s.relations) {
          put(" " + rel.name + " ");
          list(rel.pairs, [this](const TermPair& pair) { put("(" + pair.a + " " + pair.b + ")"); });
        }
        put(" ) :labels (");
        for (const auto& label : s.labels) {
          put(" " + label.world + " ");
          list(label.preds, [this](const PredRef& pr) { pred_ref(pr); });
        }
        put(" ) :designated (");
        for (std::size_t i = 0; i < s.designated.size(); ++i)
          put((i ? " " : "") + s.designated[i]);
        put(")");
      } else {
        list(init.theory->formulas, [this](const TheoryFormula& t) { theory_formula(t); });
      }
      put(")\n");
    }
    for (const auto& facts : p.facts_inits) {
      put("(:facts-init");
      for (const auto& f : facts) {
        put(" ");
        pred_ref(f);
      }
      put(")\n");
    }
    for (const auto& goal : p.goals) {
      put("(:goal ");
      formula(goal);
      put(")\n");
    }
    put(")\n");
  }

  void theory_formula(const TheoryFormula& t) {
    switch (t.kind) {
      case TheoryFormula::Kind::Plain:
        formula(t.prop);
        break;
      case TheoryFormula::Kind::CK:
        put("([C. All] ");
        formula(t.prop);
        put(")");
        break;
      case TheoryFormula::Kind::CKBelief:
        put("([C. All] ([" + t.agent_term + "] ");
        formula(t.prop);
        put("))");
        break;
      case TheoryFormula::Kind::CKKw:
        put("([C. All] ([Kw. " + t.agent_term + "] ");
        formula(t.prop);
        put("))");
        break;
      case TheoryFormula::Kind::CKKwd:
        put("([C. All] (<Kw. " + t.agent_term + "> ");
        formula(t.prop);
        put("))");
        break;
    }
  }

  void domain(const Domain& d) {
    put("(define (domain " + d.name + ")\n");
    if (!d.libraries.empty()) {
      put("(:action-type-libraries");
      for (const auto& lib : d.libraries) put(" " + lib);
      put(")\n");
    }
    requirements(d.requirements);
    if (!d.types.empty()) {
      put("(:types");
      for (const auto& group : d.types) {
        for (const auto& n : group.names) put(" " + n);
        if (group.supertype) put(" - " + *group.supertype);
      }
      put(")\n");
    }
    if (!d.predicates.empty()) {
      put("(:predicates");
      for (const auto& pred : d.predicates) {
        put(" (");
        if (pred.is_fact) put(":fact ");
        put(pred.name);
        if (!pred.params.empty()) {
          put(" ");
          typed_vars(pred.params);
        }
        put(")");
      }
      put(")\n");
    }
    for (const auto& decl : d.constants) {
      put("(:constants");
      typed_names(decl);
      put(")\n");
    }
    for (const auto& event : d.events) {
      put("(:event " + event.name);
      if (!event.params.empty()) {
        put(" :parameters (");
        typed_vars(event.params);
        put(")");
      }
      if (event.precondition) {
        put(" :precondition ");
        formula(event.precondition);
      }
      if (event.effects) {
        put(" :effects ");
        if (event.effects->kind == ListNode<CondEffect>::Kind::Concat &&
            event.effects->parts.empty()) {
          put("()");
        } else {
          list(*event.effects, [this](const CondEffect& e) { cond_effect(e); });
        }
      }
      put(")\n");
    }
    for (const auto& action : d.actions) {
      put("(:action " + action.name + " :parameters ");
      params(action.params);
      put(" :action-type (" + action.type_name);
      for (const auto& ref : action.events) {
        put(" (" + ref.name);
        for (const auto& a : ref.args) put(" " + a);
        put(")");
      }
      put(")");
      if (action.obs) {
        put(" :observability-conditions ");
        list(*action.obs, [this](const ObsCond& c) { obs_cond(c); });
      }
      put(")\n");
    }
    put(")\n");
  }

  void cond_effect(const CondEffect& e) {
    switch (e.kind) {
      case CondEffect::Kind::Literal:
        literal(e.literal);
        break;
      case CondEffect::Kind::When:
      case CondEffect::Kind::Iff:
        put(e.kind == CondEffect::Kind::When ? "(when " : "(iff ");
        formula(e.condition);
        put(" ");
        list(*e.literals, [this](const Literal& l) { literal(l); });
        put(")");
        break;
    }
  }

  void literal(const Literal& l) {
    if (!l.positive) put("(not ");
    pred_ref(l.pred);
    if (!l.positive) put(")");
  }

  void obs_cond(const ObsCond& c) {
    switch (c.kind) {
      case ObsCond::Kind::Default:
        put("(default " + c.type_name + ")");
        break;
      case ObsCond::Kind::Static:
        put("(" + c.term + " " + c.type_name + ")");
        break;
      case ObsCond::Kind::IfThenElse: {
        put("(" + c.term + " (");
        bool first = true;
        for (const auto& branch : c.branches) {
          put(first ? "if " : " else-if ");
          first = false;
          formula(branch.condition);
          put(" " + branch.type_name);
        }
        if (c.else_type) put(" else " + *c.else_type);
        put("))");
        break;
      }
    }
  }

  void library(const Library& lib) {
    put("(define (action-type-library " + lib.name + ")\n");
    requirements(lib.requirements);
    for (const auto& type : lib.action_types) {
      put("(:action-type " + type.name + " :events (");
      for (std::size_t i = 0; i < type.event_vars.size(); ++i)
        put((i ? " " : "") + type.event_vars[i]);
      put(") :observability-types (");
      for (std::size_t i = 0; i < type.obs_types.size(); ++i)
        put((i ? " " : "") + type.obs_types[i]);
      put(") :relations (");
      for (const auto& rel : type.relations) {
        put(" " + rel.name + " ");
        list(rel.pairs, [this](const TermPair& pair) { put("(" + pair.a + " " + pair.b + ")"); });
      }
      put(" ) :designated (");
      for (std::size_t i = 0; i < type.designated_vars.size(); ++i)
        put((i ? " " : "") + type.designated_vars[i]);
      put(")");
      if (!type.conditions.empty()) {
        put(" :conditions (");
        for (const auto& cond : type.conditions) {
          put(" " + cond.var);
          for (const auto& k : cond.keys) put(" " + k);
        }
        put(" )");
      }
      put(")\n");
    }
    put(")\n");
  }
};

}  // namespace

std::string to_text(const ast::Fragment& fragment) {
  Printer printer;
  return printer.render(fragment);
}

}  // namespace epddl
