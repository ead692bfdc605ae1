#include "epddl/parser.hpp"

#include <algorithm>
#include <set>

namespace epddl {

using namespace ast;

bool is_reserved_name(const std::string& name) {
  static const std::set<std::string> reserved = {
      "define", "problem", "domain", "action-type-library",
      "not", "and", "or", "imply", "forall", "exists",
      "when", "iff", "if", "else", "else-if", "either",
      "entity", "object", "agent", "agent-group", "world", "event", "obs-type",
      "true", "false", "All", "basic", "default",
  };
  return reserved.count(name) > 0;
}

namespace {

const std::set<std::string> kPrimitiveReserved = {
    "entity", "object", "agent", "agent-group", "world", "event", "obs-type"};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  Fragment parse_fragment() {
    expect(TokenKind::LParen);
    expect_name("define");
    expect(TokenKind::LParen);
    Token head = expect(TokenKind::Name);
    Fragment fragment;
    if (head.text == "problem") {
      fragment.kind = Fragment::Kind::Problem;
      fragment.problem = parse_problem(head.pos);
    } else if (head.text == "domain") {
      fragment.kind = Fragment::Kind::Domain;
      fragment.domain = parse_domain(head.pos);
    } else if (head.text == "action-type-library") {
      fragment.kind = Fragment::Kind::Library;
      fragment.library = parse_library(head.pos);
    } else {
      fail(head.pos, "expected 'problem', 'domain' or 'action-type-library'");
    }
    expect(TokenKind::End);
    return fragment;
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t at_ = 0;

  // --- token plumbing ---

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(at_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  Token next() {
    const Token& t = peek();
    if (t.kind != TokenKind::End) ++at_;
    return t;
  }

  [[noreturn]] void fail(const SourcePos& pos, const std::string& message) const {
    throw ParseError(pos, message);
  }

  Token expect(TokenKind kind) {
    if (peek().kind != kind)
      fail(peek().pos, "expected " + describe(kind) + ", found '" + peek().text + "'");
    return next();
  }

  void expect_name(const std::string& text) {
    Token t = expect(TokenKind::Name);
    if (t.text != text) fail(t.pos, "expected '" + text + "', found '" + t.text + "'");
  }

  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    next();
    return true;
  }

  bool at_keyword(const std::string& text) const {
    return peek().kind == TokenKind::Keyword && peek().text == text;
  }

  Token expect_keyword(const std::string& text) {
    if (!at_keyword(text))
      fail(peek().pos, "expected '" + text + "', found '" + peek().text + "'");
    return next();
  }

  static std::string describe(TokenKind kind) {
    switch (kind) {
      case TokenKind::LParen: return "'('";
      case TokenKind::RParen: return "')'";
      case TokenKind::Name: return "a name";
      case TokenKind::Variable: return "a variable";
      case TokenKind::Keyword: return "a keyword";
      case TokenKind::LBracket: return "'['";
      case TokenKind::RBracket: return "']'";
      case TokenKind::LAngle: return "'<'";
      case TokenKind::RAngle: return "'>'";
      case TokenKind::Pipe: return "'|'";
      case TokenKind::Dash: return "'-'";
      case TokenKind::EqOp: return "'=' or '/='";
      case TokenKind::ModalityName: return "'Kw.' or 'C.'";
      case TokenKind::End: return "end of input";
    }
    return "?";
  }

  /// A freshly introduced name; reserved words are rejected here.
  std::string fresh_name() {
    Token t = expect(TokenKind::Name);
    if (is_reserved_name(t.text))
      fail(t.pos, "reserved keyword '" + t.text + "' cannot be used as a name");
    return t.text;
  }

  std::string term() {
    if (peek().kind == TokenKind::Variable) return next().text;
    Token t = expect(TokenKind::Name);
    if (is_reserved_name(t.text))
      fail(t.pos, "reserved keyword '" + t.text + "' cannot be used as a term");
    return t.text;
  }

  // --- shared productions ---

  TypeRef parse_type() {
    TypeRef type;
    type.pos = peek().pos;
    if (accept(TokenKind::LParen)) {
      expect_name("either");
      while (peek().kind == TokenKind::Name) type.primitives.push_back(primitive_type());
      if (type.primitives.empty()) fail(peek().pos, "(either ...) needs at least one type");
      expect(TokenKind::RParen);
      return type;
    }
    type.primitives.push_back(primitive_type());
    return type;
  }

  std::string primitive_type() {
    Token t = expect(TokenKind::Name);
    if (is_reserved_name(t.text) && !kPrimitiveReserved.count(t.text))
      fail(t.pos, "'" + t.text + "' is not a type name");
    return t.text;
  }

  /// typed-list(name, primitive-type); used by :objects/:agents/:constants.
  std::vector<TypedName> parse_typed_names() {
    std::vector<TypedName> out;
    std::size_t untyped_from = 0;
    while (true) {
      if (peek().kind == TokenKind::Name) {
        TypedName entry;
        entry.pos = peek().pos;
        entry.name = fresh_name();
        out.push_back(std::move(entry));
        continue;
      }
      if (peek().kind == TokenKind::Dash) {
        Token dash = next();
        if (untyped_from == out.size()) fail(dash.pos, "type with no names before '-'");
        TypeRef type;
        type.pos = peek().pos;
        type.primitives.push_back(primitive_type());
        for (std::size_t i = untyped_from; i < out.size(); ++i) out[i].type = type;
        untyped_from = out.size();
        continue;
      }
      break;
    }
    return out;
  }

  /// typed-list(variable, type); used by parameters and predicates.
  std::vector<TypedVar> parse_typed_vars() {
    std::vector<TypedVar> out;
    std::size_t untyped_from = 0;
    while (true) {
      if (peek().kind == TokenKind::Variable) {
        TypedVar v;
        v.pos = peek().pos;
        v.var = next().text;
        v.type.pos = v.pos;
        out.push_back(std::move(v));
        continue;
      }
      if (peek().kind == TokenKind::Dash) {
        Token dash = next();
        if (untyped_from == out.size()) fail(dash.pos, "type with no variables before '-'");
        TypeRef type = parse_type();
        for (std::size_t i = untyped_from; i < out.size(); ++i) out[i].type = type;
        untyped_from = out.size();
        continue;
      }
      break;
    }
    // Untyped variables default to object.
    for (std::size_t i = untyped_from; i < out.size(); ++i)
      out[i].type.primitives = {"object"};
    return out;
  }

  std::shared_ptr<const Params> parse_formal_params() {
    Params params;
    params.pos = peek().pos;
    expect(TokenKind::LParen);
    params.vars = parse_typed_vars();
    if (accept(TokenKind::Pipe)) params.condition = parse_formula();
    expect(TokenKind::RParen);
    return std::make_shared<const Params>(std::move(params));
  }

  ModalIndex parse_modal_index() {
    ModalIndex index;
    if (peek().kind == TokenKind::Name && peek().text == "All") {
      next();
      index.kind = ModalIndex::Kind::All;
      return index;
    }
    if (peek().kind == TokenKind::Name || peek().kind == TokenKind::Variable) {
      index.kind = ModalIndex::Kind::Term;
      index.term = term();
      return index;
    }
    index.kind = ModalIndex::Kind::List;
    auto list = parse_list<TermTuple>([this] { return parse_term_tuple(); });
    index.list = std::make_shared<const ListNode<TermTuple>>(std::move(list));
    return index;
  }

  TermTuple parse_term_tuple() {
    TermTuple tuple;
    tuple.pos = peek().pos;
    expect(TokenKind::LParen);
    while (peek().kind == TokenKind::Name || peek().kind == TokenKind::Variable)
      tuple.terms.push_back(term());
    if (tuple.terms.empty()) fail(tuple.pos, "term list must be non-empty");
    expect(TokenKind::RParen);
    return tuple;
  }

  ExprPtr parse_formula() {
    Expr e;
    e.pos = peek().pos;
    expect(TokenKind::LParen);
    switch (peek().kind) {
      case TokenKind::EqOp: {
        Token op = next();
        e.kind = op.text == "=" ? Expr::Kind::Eq : Expr::Kind::Neq;
        e.args.push_back(term());
        e.args.push_back(term());
        break;
      }
      case TokenKind::LBracket:
      case TokenKind::LAngle: {
        bool dual = peek().kind == TokenKind::LAngle;
        next();
        e.kind = Expr::Kind::Modal;
        e.dual = dual;
        if (peek().kind == TokenKind::ModalityName)
          e.mname = next().text == "Kw." ? Expr::MName::Kw : Expr::MName::C;
        e.mindex = parse_modal_index();
        expect(dual ? TokenKind::RAngle : TokenKind::RBracket);
        e.children.push_back(parse_formula());
        break;
      }
      case TokenKind::Name: {
        Token head = peek();
        if (head.text == "true" || head.text == "false") {
          next();
          e.kind = head.text == "true" ? Expr::Kind::True : Expr::Kind::False;
        } else if (head.text == "not") {
          next();
          e.kind = Expr::Kind::Not;
          e.children.push_back(parse_formula());
        } else if (head.text == "and" || head.text == "or") {
          next();
          e.kind = head.text == "and" ? Expr::Kind::And : Expr::Kind::Or;
          while (peek().kind == TokenKind::LParen) e.children.push_back(parse_formula());
          if (e.children.empty()) fail(head.pos, "'" + head.text + "' needs at least one formula");
        } else if (head.text == "imply") {
          next();
          e.kind = Expr::Kind::Imply;
          e.children.push_back(parse_formula());
          e.children.push_back(parse_formula());
        } else if (head.text == "forall" || head.text == "exists") {
          next();
          e.kind = head.text == "forall" ? Expr::Kind::Forall : Expr::Kind::Exists;
          e.params = parse_formal_params();
          e.children.push_back(parse_formula());
        } else {
          e.kind = Expr::Kind::Pred;
          e.pred_name = fresh_name();
          while (peek().kind == TokenKind::Name || peek().kind == TokenKind::Variable)
            e.args.push_back(term());
        }
        break;
      }
      default:
        fail(peek().pos, "expected a formula, found '" + peek().text + "'");
    }
    expect(TokenKind::RParen);
    return std::make_shared<const Expr>(std::move(e));
  }

  template <typename T, typename ItemFn>
  ListNode<T> parse_list(ItemFn item) {
    ListNode<T> node;
    node.pos = peek().pos;
    if (peek().kind == TokenKind::LParen && peek(1).kind == TokenKind::Keyword &&
        (peek(1).text == ":and" || peek(1).text == ":forall")) {
      next();  // (
      Token combinator = next();
      if (combinator.text == ":and") {
        node.kind = ListNode<T>::Kind::Concat;
        while (peek().kind != TokenKind::RParen && peek().kind != TokenKind::End)
          node.parts.push_back(parse_list<T>(item));
        if (node.parts.empty()) fail(combinator.pos, "':and' list needs at least one part");
      } else {
        node.kind = ListNode<T>::Kind::Forall;
        node.params = parse_formal_params();
        node.body = std::make_shared<const ListNode<T>>(parse_list<T>(item));
      }
      expect(TokenKind::RParen);
      return node;
    }
    node.kind = ListNode<T>::Kind::Item;
    node.item = item();
    return node;
  }

  PredRef parse_pred_ref() {
    PredRef pred;
    pred.pos = peek().pos;
    expect(TokenKind::LParen);
    pred.name = fresh_name();
    while (peek().kind == TokenKind::Name || peek().kind == TokenKind::Variable)
      pred.args.push_back(term());
    expect(TokenKind::RParen);
    return pred;
  }

  TermPair parse_pair() {
    TermPair pair;
    pair.pos = peek().pos;
    expect(TokenKind::LParen);
    pair.a = term();
    pair.b = term();
    expect(TokenKind::RParen);
    return pair;
  }

  RequireDecl parse_require_decl(SourcePos pos) {
    RequireDecl decl;
    decl.pos = pos;
    while (peek().kind == TokenKind::Keyword) decl.keys.push_back(next().text);
    if (decl.keys.empty()) fail(pos, "':requirements' needs at least one key");
    expect(TokenKind::RParen);
    return decl;
  }

  // --- problems ---

  Problem parse_problem(SourcePos pos) {
    Problem problem;
    problem.pos = pos;
    problem.name = fresh_name();
    expect(TokenKind::RParen);

    expect(TokenKind::LParen);
    expect_keyword(":domain");
    problem.domain_ref = fresh_name();
    expect(TokenKind::RParen);

    while (peek().kind == TokenKind::LParen) {
      expect(TokenKind::LParen);
      Token key = expect(TokenKind::Keyword);
      if (key.text == ":requirements") {
        problem.requirements.push_back(parse_require_decl(key.pos));
      } else if (key.text == ":objects") {
        problem.objects.push_back(parse_typed_names());
        expect(TokenKind::RParen);
      } else if (key.text == ":agents") {
        auto agents = parse_typed_names();
        if (agents.empty()) fail(key.pos, "a problem must declare at least one agent");
        problem.agents.push_back(std::move(agents));
        expect(TokenKind::RParen);
      } else if (key.text == ":agent-groups") {
        std::vector<AgentGroupDecl> groups;
        while (peek().kind == TokenKind::LParen) groups.push_back(parse_agent_group());
        problem.groups.push_back(std::move(groups));
        expect(TokenKind::RParen);
      } else if (key.text == ":init") {
        if (!problem.inits.empty())
          fail(key.pos, "duplicate ':init': the initial state must be declared exactly once");
        problem.inits.push_back(parse_init(key.pos));
        expect(TokenKind::RParen);
      } else if (key.text == ":facts-init") {
        std::vector<PredRef> facts;
        while (peek().kind == TokenKind::LParen) facts.push_back(parse_pred_ref());
        problem.facts_inits.push_back(std::move(facts));
        expect(TokenKind::RParen);
      } else if (key.text == ":goal") {
        problem.goals.push_back(parse_formula());
        expect(TokenKind::RParen);
      } else {
        fail(key.pos, "unknown problem item '" + key.text +
                          "' (expected :requirements, :objects, :agents, :agent-groups, "
                          ":init, :facts-init or :goal)");
      }
    }
    expect(TokenKind::RParen);
    return problem;
  }

  AgentGroupDecl parse_agent_group() {
    AgentGroupDecl group;
    group.pos = peek().pos;
    expect(TokenKind::LParen);
    group.name = fresh_name();
    if (accept(TokenKind::Dash)) group.type = primitive_type();
    group.members = parse_list<TermTuple>([this] { return parse_term_tuple(); });
    expect(TokenKind::RParen);
    return group;
  }

  Init parse_init(SourcePos pos) {
    Init init;
    init.pos = pos;
    if (at_keyword(":worlds")) {
      InitExplicit state;
      state.pos = pos;
      next();
      expect(TokenKind::LParen);
      while (peek().kind == TokenKind::Name) state.worlds.push_back(fresh_name());
      if (state.worlds.empty()) fail(pos, "':worlds' needs at least one world name");
      expect(TokenKind::RParen);

      expect_keyword(":relations");
      expect(TokenKind::LParen);
      while (peek().kind == TokenKind::Name) {
        RelationDecl rel;
        rel.pos = peek().pos;
        rel.name = fresh_name();
        rel.pairs = parse_list<TermPair>([this] { return parse_pair(); });
        state.relations.push_back(std::move(rel));
      }
      expect(TokenKind::RParen);

      expect_keyword(":labels");
      expect(TokenKind::LParen);
      while (peek().kind == TokenKind::Name) {
        WorldLabelDecl label;
        label.pos = peek().pos;
        label.world = fresh_name();
        label.preds = parse_list<PredRef>([this] { return parse_pred_ref(); });
        state.labels.push_back(std::move(label));
      }
      expect(TokenKind::RParen);

      expect_keyword(":designated");
      expect(TokenKind::LParen);
      while (peek().kind == TokenKind::Name) state.designated.push_back(fresh_name());
      if (state.designated.empty()) fail(pos, "':designated' needs at least one world name");
      expect(TokenKind::RParen);

      init.explicit_state = std::move(state);
      return init;
    }
    InitTheory theory;
    theory.pos = pos;
    theory.formulas = parse_list<TheoryFormula>([this] { return parse_theory_formula(); });
    init.theory = std::move(theory);
    return init;
  }

  TheoryFormula parse_theory_formula() {
    SourcePos pos = peek().pos;
    ExprPtr formula = parse_formula();
    TheoryFormula out;
    out.pos = pos;
    if (formula->kind != Expr::Kind::Modal) {
      out.kind = TheoryFormula::Kind::Plain;
      out.prop = formula;
      return out;
    }
    if (formula->dual || formula->mname != Expr::MName::C ||
        formula->mindex.kind != ModalIndex::Kind::All)
      fail(pos, "finitary S5-theory formulas must be propositional or wrapped in [C. All]");
    const ExprPtr& body = formula->children[0];
    if (body->kind != Expr::Kind::Modal) {
      out.kind = TheoryFormula::Kind::CK;
      out.prop = body;
      return out;
    }
    if (body->mindex.kind != ModalIndex::Kind::Term)
      fail(body->pos, "the inner modality of a finitary S5-theory formula takes a single agent");
    out.agent_term = body->mindex.term;
    out.prop = body->children[0];
    if (body->mname == Expr::MName::None && !body->dual) {
      out.kind = TheoryFormula::Kind::CKBelief;
    } else if (body->mname == Expr::MName::Kw && !body->dual) {
      out.kind = TheoryFormula::Kind::CKKw;
    } else if (body->mname == Expr::MName::Kw && body->dual) {
      out.kind = TheoryFormula::Kind::CKKwd;
    } else {
      fail(body->pos, "finitary S5-theory formulas allow only [i], [Kw. i] or <Kw. i> inside");
    }
    return out;
  }

  // --- domains ---

  Domain parse_domain(SourcePos pos) {
    Domain domain;
    domain.pos = pos;
    domain.name = fresh_name();
    expect(TokenKind::RParen);

    while (peek().kind == TokenKind::LParen) {
      expect(TokenKind::LParen);
      Token key = expect(TokenKind::Keyword);
      if (key.text == ":action-type-libraries") {
        while (peek().kind == TokenKind::Name) domain.libraries.push_back(fresh_name());
        if (domain.libraries.empty())
          fail(key.pos, "':action-type-libraries' needs at least one name");
        expect(TokenKind::RParen);
      } else if (key.text == ":requirements") {
        domain.requirements.push_back(parse_require_decl(key.pos));
      } else if (key.text == ":types") {
        while (peek().kind == TokenKind::Name) {
          TypeDeclGroup group;
          group.pos = peek().pos;
          while (peek().kind == TokenKind::Name) group.names.push_back(fresh_name());
          if (accept(TokenKind::Dash)) group.supertype = primitive_type();
          domain.types.push_back(std::move(group));
        }
        expect(TokenKind::RParen);
      } else if (key.text == ":predicates") {
        while (peek().kind == TokenKind::LParen) {
          expect(TokenKind::LParen);
          PredicateDecl pred;
          pred.pos = peek().pos;
          if (at_keyword(":fact")) {
            next();
            pred.is_fact = true;
          }
          pred.name = fresh_name();
          pred.params = parse_typed_vars();
          expect(TokenKind::RParen);
          domain.predicates.push_back(std::move(pred));
        }
        if (domain.predicates.empty()) fail(key.pos, "':predicates' needs at least one entry");
        expect(TokenKind::RParen);
      } else if (key.text == ":constants") {
        domain.constants.push_back(parse_typed_names());
        expect(TokenKind::RParen);
      } else if (key.text == ":event") {
        domain.events.push_back(parse_event(key.pos));
      } else if (key.text == ":action") {
        domain.actions.push_back(parse_action(key.pos));
      } else {
        fail(key.pos, "unknown domain item '" + key.text +
                          "' (expected :action-type-libraries, :requirements, :types, "
                          ":predicates, :constants, :event or :action)");
      }
    }
    expect(TokenKind::RParen);
    return domain;
  }

  EventDecl parse_event(SourcePos pos) {
    EventDecl event;
    event.pos = pos;
    event.name = fresh_name();
    if (at_keyword(":parameters")) {
      next();
      expect(TokenKind::LParen);
      event.params = parse_typed_vars();
      expect(TokenKind::RParen);
    }
    if (at_keyword(":precondition")) {
      next();
      event.precondition = parse_formula();
    }
    if (at_keyword(":effects")) {
      next();
      if (peek().kind == TokenKind::LParen && peek(1).kind == TokenKind::RParen) {
        next();
        next();
        event.effects.emplace();  // declared empty: trivial postconditions
        event.effects->kind = ListNode<CondEffect>::Kind::Concat;
        event.effects->parts.clear();
      } else {
        event.effects = parse_list<CondEffect>([this] { return parse_cond_effect(); });
      }
    }
    expect(TokenKind::RParen);
    return event;
  }

  CondEffect parse_cond_effect() {
    CondEffect effect;
    effect.pos = peek().pos;
    if (peek().kind == TokenKind::LParen && peek(1).kind == TokenKind::Name &&
        (peek(1).text == "when" || peek(1).text == "iff")) {
      next();
      Token head = next();
      effect.kind = head.text == "when" ? CondEffect::Kind::When : CondEffect::Kind::Iff;
      effect.condition = parse_formula();
      effect.literals = std::make_shared<const ListNode<Literal>>(
          parse_list<Literal>([this] { return parse_literal(); }));
      expect(TokenKind::RParen);
      return effect;
    }
    effect.kind = CondEffect::Kind::Literal;
    effect.literal = parse_literal();
    return effect;
  }

  Literal parse_literal() {
    Literal literal;
    literal.pos = peek().pos;
    if (peek().kind == TokenKind::LParen && peek(1).kind == TokenKind::Name &&
        peek(1).text == "not") {
      next();
      next();
      literal.positive = false;
      literal.pred = parse_pred_ref();
      expect(TokenKind::RParen);
      return literal;
    }
    literal.positive = true;
    literal.pred = parse_pred_ref();
    return literal;
  }

  ActionDecl parse_action(SourcePos pos) {
    ActionDecl action;
    action.pos = pos;
    action.name = fresh_name();

    expect_keyword(":parameters");
    auto params = parse_formal_params();
    action.params = *params;

    expect_keyword(":action-type");
    expect(TokenKind::LParen);
    action.type_pos = peek().pos;
    {
      Token t = expect(TokenKind::Name);
      if (t.text != "basic" && is_reserved_name(t.text))
        fail(t.pos, "reserved keyword '" + t.text + "' cannot name an action type");
      action.type_name = t.text;
    }
    while (peek().kind == TokenKind::LParen) {
      ActionEventRef ref;
      ref.pos = peek().pos;
      expect(TokenKind::LParen);
      ref.name = fresh_name();
      while (peek().kind == TokenKind::Name || peek().kind == TokenKind::Variable)
        ref.args.push_back(term());
      expect(TokenKind::RParen);
      action.events.push_back(std::move(ref));
    }
    if (action.events.empty()) fail(action.type_pos, "an action type needs at least one event");
    expect(TokenKind::RParen);

    if (at_keyword(":observability-conditions")) {
      next();
      action.obs = parse_list<ObsCond>([this] { return parse_obs_cond(); });
    }
    expect(TokenKind::RParen);
    return action;
  }

  ObsCond parse_obs_cond() {
    ObsCond cond;
    cond.pos = peek().pos;
    expect(TokenKind::LParen);
    if (peek().kind == TokenKind::Name && peek().text == "default") {
      next();
      cond.kind = ObsCond::Kind::Default;
      cond.type_name = fresh_name();
      expect(TokenKind::RParen);
      return cond;
    }
    cond.term = term();
    if (peek().kind == TokenKind::Name) {
      cond.kind = ObsCond::Kind::Static;
      cond.type_name = fresh_name();
      expect(TokenKind::RParen);
      return cond;
    }
    cond.kind = ObsCond::Kind::IfThenElse;
    expect(TokenKind::LParen);
    expect_name("if");
    {
      ObsCond::Branch branch;
      branch.condition = parse_formula();
      branch.type_name = fresh_name();
      cond.branches.push_back(std::move(branch));
    }
    while (peek().kind == TokenKind::Name && peek().text == "else-if") {
      next();
      ObsCond::Branch branch;
      branch.condition = parse_formula();
      branch.type_name = fresh_name();
      cond.branches.push_back(std::move(branch));
    }
    if (peek().kind == TokenKind::Name && peek().text == "else") {
      next();
      cond.else_type = fresh_name();
    }
    expect(TokenKind::RParen);
    expect(TokenKind::RParen);
    return cond;
  }

  // --- libraries ---

  Library parse_library(SourcePos pos) {
    Library library;
    library.pos = pos;
    library.name = fresh_name();
    expect(TokenKind::RParen);

    while (peek().kind == TokenKind::LParen) {
      expect(TokenKind::LParen);
      Token key = expect(TokenKind::Keyword);
      if (key.text == ":requirements") {
        library.requirements.push_back(parse_require_decl(key.pos));
      } else if (key.text == ":action-type") {
        library.action_types.push_back(parse_action_type(key.pos));
      } else {
        fail(key.pos, "unknown library item '" + key.text +
                          "' (expected :requirements or :action-type)");
      }
    }
    expect(TokenKind::RParen);
    return library;
  }

  ActionTypeDecl parse_action_type(SourcePos pos) {
    ActionTypeDecl decl;
    decl.pos = pos;
    decl.name = fresh_name();

    expect_keyword(":events");
    expect(TokenKind::LParen);
    while (peek().kind == TokenKind::Variable) decl.event_vars.push_back(next().text);
    if (decl.event_vars.empty()) fail(pos, "':events' needs at least one event variable");
    expect(TokenKind::RParen);

    expect_keyword(":observability-types");
    // Both the parenthesized and the bare name sequence are accepted.
    bool parenthesized = accept(TokenKind::LParen);
    while (peek().kind == TokenKind::Name) decl.obs_types.push_back(fresh_name());
    if (decl.obs_types.empty()) fail(pos, "':observability-types' needs at least one name");
    if (parenthesized) expect(TokenKind::RParen);

    expect_keyword(":relations");
    expect(TokenKind::LParen);
    while (peek().kind == TokenKind::Name) {
      RelationDecl rel;
      rel.pos = peek().pos;
      rel.name = fresh_name();
      rel.pairs = parse_list<TermPair>([this] { return parse_pair(); });
      decl.relations.push_back(std::move(rel));
    }
    expect(TokenKind::RParen);

    expect_keyword(":designated");
    expect(TokenKind::LParen);
    while (peek().kind == TokenKind::Variable) decl.designated_vars.push_back(next().text);
    if (decl.designated_vars.empty()) fail(pos, "':designated' needs at least one event variable");
    expect(TokenKind::RParen);

    if (at_keyword(":conditions")) {
      next();
      expect(TokenKind::LParen);
      while (peek().kind == TokenKind::Variable) {
        EventCondKeys keys;
        keys.pos = peek().pos;
        keys.var = next().text;
        while (peek().kind == TokenKind::Keyword) keys.keys.push_back(next().text);
        if (keys.keys.empty()) fail(keys.pos, "event conditions need at least one key");
        decl.conditions.push_back(std::move(keys));
      }
      expect(TokenKind::RParen);
    }
    expect(TokenKind::RParen);
    return decl;
  }
};

}  // namespace

ast::Fragment parse(const std::vector<Token>& tokens) {
  Parser parser(tokens);
  return parser.parse_fragment();
}

ast::Fragment parse_text(std::string_view text, const std::string& filename) {
  return parse(lex(text, filename));
}

}  // namespace epddl
