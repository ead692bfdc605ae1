#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epddl/errors.hpp"

namespace epddl::ast {

/// Primitive type or (either t1 ... tk). A single primitive is a 1-tuple.
struct TypeRef {
  std::vector<std::string> primitives;
  SourcePos pos;
  bool is_either() const { return primitives.size() > 1; }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct TypedVar {
  std::string var;  // "?x"
  TypeRef type;
  SourcePos pos;
};

/// Formal parameters: typed variables plus an optional comprehension condition.
struct Params {
  std::vector<TypedVar> vars;
  ExprPtr condition;  // null when no '|' guard is present
  SourcePos pos;
};

/// Generic EPDDL list(x): a single item, a concatenation, or a quantified list.
template <typename T>
struct ListNode {
  enum class Kind { Item, Concat, Forall };
  Kind kind = Kind::Item;
  T item{};
  std::vector<ListNode<T>> parts;            // Concat
  std::shared_ptr<const Params> params;      // Forall
  std::shared_ptr<const ListNode<T>> body;   // Forall
  SourcePos pos;
};

/// One element of an agent-group list: a non-empty tuple of terms.
struct TermTuple {
  std::vector<std::string> terms;
  SourcePos pos;
};

struct ModalIndex {
  enum class Kind { Term, All, List };
  Kind kind = Kind::Term;
  std::string term;
  std::shared_ptr<const ListNode<TermTuple>> list;
};

/// Surface formula, before type checking; may contain variables.
struct Expr {
  enum class Kind { True, False, Pred, Eq, Neq, Not, And, Or, Imply, Forall, Exists, Modal };
  Kind kind = Kind::True;
  std::string pred_name;
  std::vector<std::string> args;       // Pred arguments; Eq/Neq operands
  std::vector<ExprPtr> children;
  std::shared_ptr<const Params> params;  // Forall / Exists
  bool dual = false;                     // modal written with <...>
  enum class MName { None, Kw, C } mname = MName::None;
  ModalIndex mindex;
  SourcePos pos;
};

struct TermPair {
  std::string a, b;  // terms: world names or quantified variables
  SourcePos pos;
};

struct PredRef {
  std::string name;
  std::vector<std::string> args;
  SourcePos pos;
};

struct Literal {
  bool positive = true;
  PredRef pred;
  SourcePos pos;
};

struct CondEffect {
  enum class Kind { Literal, When, Iff };
  Kind kind = Kind::Literal;
  Literal literal;                                   // Kind::Literal
  ExprPtr condition;                                 // When / Iff
  std::shared_ptr<const ListNode<Literal>> literals; // When / Iff
  SourcePos pos;
};

struct ObsCond {
  enum class Kind { Static, IfThenElse, Default };
  struct Branch {
    ExprPtr condition;
    std::string type_name;
  };
  Kind kind = Kind::Static;
  std::string term;                      // Static / IfThenElse subject
  std::string type_name;                 // Static / Default
  std::vector<Branch> branches;          // if, else-if...
  std::optional<std::string> else_type;  // trailing else
  SourcePos pos;
};

/// The five admissible shapes of finitary S5-theory formulas.
struct TheoryFormula {
  enum class Kind { Plain, CK, CKBelief, CKKw, CKKwd };
  Kind kind = Kind::Plain;
  std::string agent_term;  // CKBelief / CKKw / CKKwd
  ExprPtr prop;
  SourcePos pos;
};

struct RequireDecl {
  std::vector<std::string> keys;
  SourcePos pos;
};

struct TypedName {
  std::string name;
  std::optional<TypeRef> type;
  SourcePos pos;
};

struct AgentGroupDecl {
  std::string name;
  std::optional<std::string> type;
  ListNode<TermTuple> members;
  SourcePos pos;
};

/// `name list(pair)`: an agent relation in inits, an obs-type relation in
/// action types.
struct RelationDecl {
  std::string name;
  ListNode<TermPair> pairs;
  SourcePos pos;
};

struct WorldLabelDecl {
  std::string world;
  ListNode<PredRef> preds;
  SourcePos pos;
};

struct InitExplicit {
  std::vector<std::string> worlds;
  std::vector<RelationDecl> relations;
  std::vector<WorldLabelDecl> labels;
  std::vector<std::string> designated;
  SourcePos pos;
};

struct InitTheory {
  ListNode<TheoryFormula> formulas;
  SourcePos pos;
};

struct Init {
  std::optional<InitExplicit> explicit_state;
  std::optional<InitTheory> theory;
  SourcePos pos;
};

struct Problem {
  std::string name;
  std::string domain_ref;
  std::vector<RequireDecl> requirements;
  std::vector<std::vector<TypedName>> objects;
  std::vector<std::vector<TypedName>> agents;
  std::vector<std::vector<AgentGroupDecl>> groups;
  std::vector<Init> inits;                      // well-formed specs have exactly one
  std::vector<std::vector<PredRef>> facts_inits;  // and at most one of these
  std::vector<ExprPtr> goals;
  SourcePos pos;
};

struct TypeDeclGroup {
  std::vector<std::string> names;
  std::optional<std::string> supertype;
  SourcePos pos;
};

struct PredicateDecl {
  bool is_fact = false;
  std::string name;
  std::vector<TypedVar> params;
  SourcePos pos;
};

struct EventDecl {
  std::string name;
  std::vector<TypedVar> params;
  ExprPtr precondition;  // null = trivial
  std::optional<ListNode<CondEffect>> effects;  // absent or `()` = trivial
  SourcePos pos;
};

struct ActionEventRef {
  std::string name;
  std::vector<std::string> args;
  SourcePos pos;
};

struct ActionDecl {
  std::string name;
  Params params;
  std::string type_name;
  SourcePos type_pos;
  std::vector<ActionEventRef> events;
  std::optional<ListNode<ObsCond>> obs;
  SourcePos pos;
};

struct Domain {
  std::string name;
  std::vector<std::string> libraries;
  std::vector<RequireDecl> requirements;
  std::vector<TypeDeclGroup> types;
  std::vector<PredicateDecl> predicates;
  std::vector<std::vector<TypedName>> constants;
  std::vector<EventDecl> events;
  std::vector<ActionDecl> actions;
  SourcePos pos;
};

struct EventCondKeys {
  std::string var;
  std::vector<std::string> keys;
  SourcePos pos;
};

struct ActionTypeDecl {
  std::string name;
  std::vector<std::string> event_vars;
  std::vector<std::string> obs_types;
  std::vector<RelationDecl> relations;
  std::vector<std::string> designated_vars;
  std::vector<EventCondKeys> conditions;
  SourcePos pos;
};

struct Library {
  std::string name;
  std::vector<RequireDecl> requirements;
  std::vector<ActionTypeDecl> action_types;
  SourcePos pos;
};

/// One parsed source file.
struct Fragment {
  enum class Kind { Problem, Domain, Library };
  Kind kind = Kind::Problem;
  std::optional<Problem> problem;
  std::optional<Domain> domain;
  std::optional<Library> library;
};

/// A full specification: one problem, one domain, any number of libraries.
struct Spec {
  Problem problem;
  Domain domain;
  std::vector<Library> libraries;
};

}  // namespace epddl::ast
