#include "epddl/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace epddl {

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

std::vector<AgentId> normalize_group(std::vector<AgentId> agents) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  if (agents.empty()) throw std::invalid_argument("modal group index must be non-empty");
  return agents;
}

}  // namespace

FormulaPtr Formula::truth() {
  static const FormulaPtr t = [] {
    Formula f;
    f.tag = Tag::True;
    return make(std::move(f));
  }();
  return t;
}

FormulaPtr Formula::falsity() {
  static const FormulaPtr f = [] {
    Formula ff;
    ff.tag = Tag::False;
    return make(std::move(ff));
  }();
  return f;
}

FormulaPtr Formula::make_atom(Atom name) {
  Formula f;
  f.tag = Tag::Atom;
  f.atom = std::move(name);
  return make(std::move(f));
}

FormulaPtr Formula::negate(FormulaPtr inner) {
  Formula f;
  f.tag = Tag::Not;
  f.children = {std::move(inner)};
  return make(std::move(f));
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
  if (fs.empty()) throw std::invalid_argument("conjunction must be non-empty");
  Formula f;
  f.tag = Tag::And;
  f.children = std::move(fs);
  return make(std::move(f));
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
  if (fs.empty()) throw std::invalid_argument("disjunction must be non-empty");
  Formula f;
  f.tag = Tag::Or;
  f.children = std::move(fs);
  return make(std::move(f));
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.tag = Tag::Imply;
  f.children = {std::move(a), std::move(b)};
  return make(std::move(f));
}

FormulaPtr Formula::modal(ModalKind kind, AgentId agent, FormulaPtr inner) {
  if (kind == ModalKind::CKBox || kind == ModalKind::CKDiamond)
    return modal_group(kind, {std::move(agent)}, std::move(inner));
  Formula f;
  f.tag = Tag::Modal;
  f.kind = kind;
  f.group_index = false;
  f.index = {std::move(agent)};
  f.children = {std::move(inner)};
  return make(std::move(f));
}

FormulaPtr Formula::modal_group(ModalKind kind, std::vector<AgentId> agents, FormulaPtr inner) {
  Formula f;
  f.tag = Tag::Modal;
  f.kind = kind;
  f.group_index = true;
  f.index = normalize_group(std::move(agents));
  f.children = {std::move(inner)};
  return make(std::move(f));
}

int Formula::modal_depth() const {
  int depth = 0;
  for (const auto& c : children) depth = std::max(depth, c->modal_depth());
  return tag == Tag::Modal ? depth + 1 : depth;
}

int Formula::size() const {
  int n = 1;
  for (const auto& c : children) n += c->size();
  return n;
}

const char* modal_kind_name(ModalKind kind) {
  switch (kind) {
    case ModalKind::Box: return "box";
    case ModalKind::Diamond: return "diamond";
    case ModalKind::KwBox: return "Kw.box";
    case ModalKind::KwDiamond: return "Kw.diamond";
    case ModalKind::CKBox: return "C.box";
    case ModalKind::CKDiamond: return "C.diamond";
  }
  return "?";
}

std::string Formula::to_string() const {
  switch (tag) {
    case Tag::True: return "true";
    case Tag::False: return "false";
    case Tag::Atom: return atom;
    case Tag::Not: return "(not " + children[0]->to_string() + ")";
    case Tag::And:
    case Tag::Or: {
      std::string out = tag == Tag::And ? "(and" : "(or";
      for (const auto& c : children) out += " " + c->to_string();
      return out + ")";
    }
    case Tag::Imply:
      return "(imply " + children[0]->to_string() + " " + children[1]->to_string() + ")";
    case Tag::Modal: {
      std::string out = "(";
      out += modal_kind_name(kind);
      out += group_index ? " {" : " ";
      for (std::size_t i = 0; i < index.size(); ++i) {
        if (i > 0) out += ",";
        out += index[i];
      }
      if (group_index) out += "}";
      return out + " " + children[0]->to_string() + ")";
    }
  }
  return "?";
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Formula::Tag::True:
    case Formula::Tag::False:
      return true;
    case Formula::Tag::Atom:
      return a->atom == b->atom;
    default:
      break;
  }
  if (a->tag == Formula::Tag::Modal) {
    if (a->kind != b->kind || a->group_index != b->group_index || a->index != b->index)
      return false;
  }
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!equal(a->children[i], b->children[i])) return false;
  return true;
}

}  // namespace epddl
