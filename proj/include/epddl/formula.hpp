#pragma once

#include <memory>
#include <string>
#include <vector>

namespace epddl {

using AgentId = std::string;
using Atom = std::string;

/// Modal operator kinds. Box/Diamond accept a single agent or a group,
/// the common-knowledge kinds always carry a group index.
enum class ModalKind { Box, Diamond, KwBox, KwDiamond, CKBox, CKDiamond };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable ground epistemic formula. Nodes are shared freely; there is no
/// interior mutation after construction.
class Formula {
 public:
  enum class Tag { True, False, Atom, Not, And, Or, Imply, Modal };

  Tag tag = Tag::True;
  Atom atom;                     // Tag::Atom
  ModalKind kind = ModalKind::Box;
  bool group_index = false;      // modal index is a set (always true for CK)
  std::vector<AgentId> index;    // sorted and deduplicated when group_index
  std::vector<FormulaPtr> children;

  static FormulaPtr truth();
  static FormulaPtr falsity();
  static FormulaPtr make_atom(Atom name);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(std::vector<FormulaPtr> fs);   // non-empty
  static FormulaPtr disj(std::vector<FormulaPtr> fs);   // non-empty
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr modal(ModalKind kind, AgentId agent, FormulaPtr f);
  static FormulaPtr modal_group(ModalKind kind, std::vector<AgentId> agents, FormulaPtr f);

  /// Maximum nesting of modal operators.
  int modal_depth() const;
  /// Node count of the AST.
  int size() const;

  std::string to_string() const;
};

/// Structural equality (group indices compare as sets).
bool equal(const FormulaPtr& a, const FormulaPtr& b);

const char* modal_kind_name(ModalKind kind);

}  // namespace epddl
