#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "epddl/ast.hpp"
#include "epddl/errors.hpp"
#include "epddl/formula.hpp"
#include "epddl/requirements.hpp"

namespace epddl {

/// Subtype forest over primitive types. object/agent/agent-group sit under
/// entity; world/event/obs-type stand alone and cannot be specialized.
class TypeEnv {
 public:
  TypeEnv();

  /// Declares `name` with the given supertype; returns an error message or "".
  std::string declare(const std::string& name, const std::string& supertype);

  bool known(const std::string& name) const;
  /// Reflexive-transitive subtype check on primitive types.
  bool compatible(const std::string& sub, const std::string& super) const;
  /// Either-type compatibility: every member of `a` fits some member of `b`.
  bool compatible(const ast::TypeRef& a, const ast::TypeRef& b) const;

 private:
  std::map<std::string, std::string> parent_;  // root types map to ""
};

struct PredicateInfo {
  std::string name;
  std::vector<ast::TypeRef> param_types;
  bool is_fact = false;
};

/// Output of the static checker: the merged AST plus the symbol tables the
/// grounder consumes.
struct TypedSpec {
  ast::Spec spec;
  RequirementSet requirements;
  TypeEnv types;

  std::vector<std::string> entity_order;             // constants, objects, agents, groups
  std::map<std::string, std::string> entity_type;    // entity -> primitive type
  std::vector<AgentId> agents;                       // declaration order
  std::map<std::string, std::vector<AgentId>> group_members;

  std::vector<std::string> predicate_order;
  std::map<std::string, PredicateInfo> predicates;

  std::map<std::string, std::size_t> event_index;        // into spec.domain.events
  std::map<std::string, ast::ActionTypeDecl> action_types;  // includes "basic"

  std::set<Atom> facts_true;  // ground facts-init atoms

  const ast::EventDecl& event(const std::string& name) const {
    return spec.domain.events.at(event_index.at(name));
  }
};

/// Full static check; collects every violation and throws TypeCheckError when
/// any was found.
TypedSpec type_check(const ast::Spec& spec);

/// Canonical ground-atom name: predicate plus '_'-joined arguments.
Atom make_atom_name(const std::string& predicate, const std::vector<std::string>& args);

/// Ground action / ground event naming: name plus ','-joined arguments after '_'.
std::string make_instance_name(const std::string& name, const std::vector<std::string>& args);

}  // namespace epddl
