#include "doctest.h"

#include <algorithm>

#include "epddl/errors.hpp"
#include "epddl/lexer.hpp"
#include "epddl/parser.hpp"
#include "epddl/requirements.hpp"
#include "epddl/typecheck.hpp"
#include "support/files.hpp"

using namespace epddl;

TEST_CASE("lexing basics") {
  auto tokens = lex("(:objects b1 - block)", "t");
  REQUIRE(tokens.size() == 7);  // incl. End
  CHECK(tokens[0].kind == TokenKind::LParen);
  CHECK(tokens[1].kind == TokenKind::Keyword);
  CHECK(tokens[1].text == ":objects");
  CHECK(tokens[2].kind == TokenKind::Name);
  CHECK(tokens[2].text == "b1");
  CHECK(tokens[3].kind == TokenKind::Dash);
  CHECK(tokens[4].kind == TokenKind::Name);
  CHECK(tokens[4].text == "block");
  CHECK(tokens[5].kind == TokenKind::RParen);

  auto var = lex("?x", "t");
  REQUIRE(var.size() == 2);
  CHECK(var[0].kind == TokenKind::Variable);
  CHECK(var[0].text == "?x");
  CHECK_THROWS_AS(lex("? x", "t"), LexError);

  auto commented = lex("; comment\n(foo)", "t");
  REQUIRE(commented.size() == 4);
  CHECK(commented[0].kind == TokenKind::LParen);
  CHECK(commented[1].text == "foo");
  CHECK(commented[1].pos.line == 2);

  auto modal = lex("([Kw. A] (<C. (x)> (/= a b)))", "t");
  CHECK(modal[1].kind == TokenKind::LBracket);
  CHECK(modal[2].kind == TokenKind::ModalityName);
  CHECK(modal[2].text == "Kw.");
  auto eq = std::find_if(modal.begin(), modal.end(),
                         [](const Token& t) { return t.kind == TokenKind::EqOp; });
  REQUIRE(eq != modal.end());
  CHECK(eq->text == "/=");

  CHECK_THROWS_AS(lex("a $ b", "t"), LexError);
  CHECK_THROWS_AS(lex("a / b", "t"), LexError);
}

TEST_CASE("parsing ebw1") {
  ast::Fragment fragment = files::parse_data("ebw1.epddl");
  REQUIRE(fragment.kind == ast::Fragment::Kind::Problem);
  const ast::Problem& problem = *fragment.problem;
  CHECK(problem.name == "ebw1");
  CHECK(problem.domain_ref == "epistemic-blocks-world");

  std::size_t objects = 0;
  for (const auto& decl : problem.objects) objects += decl.size();
  CHECK(objects == 7);
  std::size_t agents = 0;
  for (const auto& decl : problem.agents) agents += decl.size();
  CHECK(agents == 3);

  REQUIRE(problem.inits.size() == 1);
  REQUIRE(problem.inits[0].explicit_state.has_value());
  const auto& init = *problem.inits[0].explicit_state;
  CHECK(init.worlds == std::vector<std::string>{"w1", "w2", "w3"});
  CHECK(init.relations.size() == 3);
  CHECK(init.labels.size() == 3);
  CHECK(init.designated == std::vector<std::string>{"w1", "w2"});

  REQUIRE(problem.goals.size() == 1);
  const auto& goal = problem.goals[0];
  CHECK(goal->kind == ast::Expr::Kind::Modal);
  CHECK(goal->mname == ast::Expr::MName::C);
  CHECK(goal->mindex.kind == ast::ModalIndex::Kind::All);
}

TEST_CASE("parsing the action type library") {
  ast::Fragment fragment = files::parse_data("my-library.epddl");
  REQUIRE(fragment.kind == ast::Fragment::Kind::Library);
  const ast::Library& lib = *fragment.library;
  CHECK(lib.name == "my-library");
  REQUIRE(lib.action_types.size() == 4);
  CHECK(lib.action_types[0].name == "public-ontic");
  CHECK(lib.action_types[1].name == "private");
  CHECK(lib.action_types[1].event_vars == std::vector<std::string>{"?e", "?nil"});
  CHECK(lib.action_types[1].obs_types == std::vector<std::string>{"Fully", "Oblivious"});
  for (const auto& type : lib.action_types) CHECK(!type.conditions.empty());
  CHECK(lib.action_types[3].designated_vars == std::vector<std::string>{"?e"});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(
      parse_text("(define (problem p) (:domain d) (:init :worlds (w) :relations () :labels () "
                 ":designated (w)) (:init :worlds (w) :relations () :labels () :designated (w)))",
                 "t"),
      ParseError);
  CHECK_THROWS_AS(parse_text("(define (problem p) (:domain d) (:objects and))", "t"), ParseError);
  CHECK_THROWS_AS(parse_text("(define (problem p) (:domain d) (:wibble))", "t"), ParseError);
  CHECK_THROWS_AS(parse_text("(define (gizmo g))", "t"), ParseError);

  // Theory formulas outside the five shapes.
  CHECK_THROWS_AS(
      parse_text("(define (problem p) (:domain d) (:init ([A] (on b1 c1))))", "t"), ParseError);
  CHECK_THROWS_AS(
      parse_text("(define (problem p) (:domain d) (:init ([C. All] ([C. All] (p)))))", "t"),
      ParseError);
}

TEST_CASE("pretty-printing round trip") {
  for (const auto& name :
       {"ebw1.epddl", "ebw.epddl", "my-library.epddl", "ebw1-finitary.epddl",
        "ebw-planning.epddl", "ebw-planning-lib.epddl", "ebw1-planning.epddl",
        "ebw-distracted.epddl", "ebw1-distracted.epddl", "rooms.epddl", "rooms-1.epddl"}) {
    CAPTURE(name);
    ast::Fragment first = files::parse_data(name);
    std::string printed = to_text(first);
    ast::Fragment reparsed = parse_text(printed, std::string(name) + "#printed");
    CHECK(to_text(reparsed) == printed);
  }
}

TEST_CASE("requirement closure") {
  CHECK(resolve_requirements({}) == RequirementSet{":pal"});

  auto with_negative_goals = resolve_requirements({":negative-goals"});
  CHECK(with_negative_goals.count(":disjunctive-goals"));

  auto with_del = resolve_requirements({":del"});
  for (const auto& key :
       {":typing", ":equality", ":partial-observability", ":ontic-actions",
        ":multi-pointed-models", ":general-frames", ":general-formulas"})
    CHECK(with_del.count(key));
  // :general-formulas cascades down to the concrete feature keys.
  CHECK(with_del.count(":negative-preconditions"));
  CHECK(with_del.count(":modal-goals"));
  CHECK(with_del.count(":universal-obs-conditions"));
  CHECK(with_del.count(":conditional-effects"));
  CHECK(with_del.count(":lists") == 0);

  auto fin = resolve_requirements({":finitary-S5-theories"});
  CHECK(fin.count(":common-knowledge"));
  CHECK(fin.count(":knowing-whether"));
  CHECK(fin.count(":group-modalities"));
  CHECK(fin.count(":lists"));

  auto sck = resolve_requirements({":static-common-knowledge"});
  CHECK(sck.count(":group-modalities"));
  CHECK(sck.count(":facts"));

  CHECK(resolve_requirements({":agent-groups"}).count(":lists"));
  CHECK(resolve_requirements({":quantified-preconditions"}).count(":universal-preconditions"));
  CHECK(resolve_requirements({":quantified-preconditions"}).count(":existential-preconditions"));
  CHECK(resolve_requirements({":negative-postconditions"}).count(":conditional-effects"));

  CHECK_THROWS_AS(resolve_requirements({":frobnicate"}), GroundError);
}

TEST_CASE("requirement closure is idempotent and monotone") {
  std::vector<std::string> keys(all_requirement_keys().begin(), all_requirement_keys().end());
  for (const auto& key : keys) {
    auto once = resolve_requirements({key});
    auto twice = resolve_requirements({once.begin(), once.end()});
    CHECK(once == twice);
  }
  // S subset of T implies resolve(S) subset of resolve(T), spot-checked on chains.
  for (std::size_t i = 0; i + 1 < keys.size(); i += 2) {
    auto small = resolve_requirements({keys[i]});
    auto big = resolve_requirements({keys[i], keys[i + 1]});
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
  }
}

TEST_CASE("type checking accepts the golden specifications") {
  CHECK_NOTHROW(type_check(files::ebw1_spec()));
  CHECK_NOTHROW(type_check(files::ebw1_finitary_spec()));
  CHECK_NOTHROW(type_check(files::planning_spec()));
  CHECK_NOTHROW(type_check(files::distracted_spec()));
}

TEST_CASE("typed spec tables") {
  TypedSpec typed = type_check(files::ebw1_spec());
  CHECK(typed.agents == std::vector<AgentId>{"A", "L", "R"});
  CHECK(typed.entity_type.at("b1") == "block");
  CHECK(typed.entity_type.at("c3") == "column");
  CHECK(typed.types.compatible("block", "object"));
  CHECK(typed.types.compatible("block", "entity"));
  CHECK_FALSE(typed.types.compatible("block", "agent"));
  CHECK(typed.predicates.at("on").param_types.size() == 2);
  CHECK(typed.action_types.count("basic"));
  CHECK(typed.action_types.count("private"));

  // Compatibility is reflexive and transitive on primitive types, and every
  // declared entity carries exactly one primitive type after defaulting.
  std::vector<std::string> prims = {"block", "column", "object", "agent",
                                    "agent-group", "entity"};
  for (const auto& t : prims) CHECK(typed.types.compatible(t, t));
  for (const auto& a : prims)
    for (const auto& b : prims)
      for (const auto& c : prims)
        if (typed.types.compatible(a, b) && typed.types.compatible(b, c))
          CHECK(typed.types.compatible(a, c));
  for (const auto& entity : typed.entity_order)
    CHECK(typed.types.known(typed.entity_type.at(entity)));

  // Either-types: every member must fit some member of the target.
  ast::TypeRef either_bc{{"block", "column"}, {}};
  ast::TypeRef object{{"object"}, {}};
  CHECK(typed.types.compatible(either_bc, object));
  CHECK_FALSE(typed.types.compatible(object, either_bc));
  CHECK(typed.types.compatible(ast::TypeRef{{"block"}, {}}, either_bc));
}

namespace {

bool fails_with_rule(const ast::Spec& spec, const std::string& rule) {
  try {
    type_check(spec);
  } catch (const TypeCheckError& e) {
    for (const auto& d : e.diagnostics)
      if (d.rule == rule) return true;
    return false;
  }
  return false;
}

}  // namespace

TEST_CASE("type checking rejects rule violations") {
  // Two observability conditions for the same agent (rule 2).
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw.epddl");
    auto at = text.find("(?i Fully)");
    text.insert(at, "(?i Oblivious) ");
    spec.domain = *parse_text(text, "ebw-dup-obs").domain;
    CHECK(fails_with_rule(spec, "multiple-obs-conditions"));
  }
  // Binding a non-trivial event to ?nil of the private type.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw.epddl");
    auto at = text.find("(private (e-move ?b ?x ?y) (nil))");
    REQUIRE(at != std::string::npos);
    std::string replacement = "(private (e-move ?b ?x ?y) (e-peek-pos ?b ?x))";
    text.replace(at, std::string("(private (e-move ?b ?x ?y) (nil))").size(), replacement);
    spec.domain = *parse_text(text, "ebw-bad-nil").domain;
    CHECK(fails_with_rule(spec, "event-condition-violated"));
  }
  // Feature without its requirement: strip :negative-preconditions.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw.epddl");
    auto at = text.find(":negative-preconditions");
    text.erase(at, std::string(":negative-preconditions").size());
    spec.domain = *parse_text(text, "ebw-no-neg").domain;
    CHECK(fails_with_rule(spec, "missing-requirement"));
  }
  // Unknown entity in a goal.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw1.epddl");
    auto at = text.find("(on b2 b1)");
    text.replace(at, 10, "(on b9 b1)");
    spec.problem = *parse_text(text, "ebw1-bad-goal").problem;
    CHECK(fails_with_rule(spec, "unknown-entity"));
  }
  // Arity mismatch.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw1.epddl");
    auto at = text.find("(on b2 b1)");
    text.replace(at, 10, "(on b2)");
    spec.problem = *parse_text(text, "ebw1-bad-arity").problem;
    CHECK(fails_with_rule(spec, "bad-arity"));
  }
  // Missing init.
  {
    ast::Spec spec = files::ebw1_spec();
    spec.problem.inits.clear();
    CHECK(fails_with_rule(spec, "missing-init"));
  }
  // Event binding arity: private takes two events.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw.epddl");
    auto at = text.find("(private (e-move ?b ?x ?y) (nil))");
    text.replace(at, std::string("(private (e-move ?b ?x ?y) (nil))").size(),
                 "(private (e-move ?b ?x ?y))");
    spec.domain = *parse_text(text, "ebw-one-event").domain;
    CHECK(fails_with_rule(spec, "bad-event-binding"));
  }
  // public-ontic requires non-trivial postconditions; e-tell has none.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string text = files::data("ebw.epddl");
    auto at = text.find("(basic (e-tell ?i ?b ?x))");
    text.replace(at, std::string("(basic (e-tell ?i ?b ?x))").size(),
                 "(public-ontic (e-tell ?i ?b ?x))");
    spec.domain = *parse_text(text, "ebw-epistemic-ontic").domain;
    CHECK(fails_with_rule(spec, "event-condition-violated"));
  }
  // A propositional-precondition event variable rejects modal preconditions.
  {
    ast::Spec spec = files::ebw1_spec();
    std::string library_text = files::data("my-library.epddl");
    auto at = library_text.find("    :conditions (?e :non-trivial-postconditions)");
    REQUIRE(at != std::string::npos);
    library_text.insert(at + std::string("    :conditions (?e :non-trivial-postconditions")
                                 .size(),
                        " :propositional-precondition");
    spec.libraries = {*parse_text(library_text, "lib-prop").library};
    std::string domain_text = files::data("ebw.epddl");
    auto tell = domain_text.find("(basic (e-tell ?i ?b ?x))");
    domain_text.replace(tell, std::string("(basic (e-tell ?i ?b ?x))").size(),
                        "(public-ontic (e-tell ?i ?b ?x))");
    spec.domain = *parse_text(domain_text, "ebw-prop-pre").domain;
    CHECK(fails_with_rule(spec, "event-condition-violated"));
  }
}

TEST_CASE("static common knowledge licenses only fact formulas") {
  ast::Spec spec =
      files::spec_from("rooms-1.epddl", "rooms.epddl", {"my-library.epddl"});
  CHECK_NOTHROW(type_check(spec));

  // Common knowledge of a non-fact needs the full :common-knowledge key.
  std::string text = files::data("rooms-1.epddl");
  auto at = text.find("([C. All] (adj r1 r2))");
  REQUIRE(at != std::string::npos);
  text.replace(at, std::string("([C. All] (adj r1 r2))").size(),
               "([C. All] (in Bob r3))");
  spec.problem = *parse_text(text, "rooms-nonstatic").problem;
  CHECK(fails_with_rule(spec, "missing-requirement"));
}

TEST_CASE("the basic action type checks under bare :pal") {
  std::string domain_text =
      "(define (domain d1)"
      " (:predicates (at ?x - object ?y - object))"
      " (:event e-say :parameters (?x ?y - object) :precondition (at ?x ?y))"
      " (:action say :parameters (?x ?y - object) :action-type (basic (e-say ?x ?y))))";
  std::string problem_text =
      "(define (problem p1) (:domain d1)"
      " (:objects m n)"
      " (:agents A)"
      " (:init :worlds (u) :relations (A (u u)) :labels (u (at m n)) :designated (u))"
      " (:goal (at m n)))";
  ast::Spec spec;
  spec.domain = *parse_text(domain_text, "d1").domain;
  spec.problem = *parse_text(problem_text, "p1").problem;
  TypedSpec typed = type_check(spec);
  CHECK(typed.requirements == RequirementSet{":pal"});

  // Disjunctive goal breaks the baseline.
  std::string bad = problem_text;
  bad.replace(bad.find("(:goal (at m n))"), std::string("(:goal (at m n))").size(),
              "(:goal (or (at m n) (at n m)))");
  spec.problem = *parse_text(bad, "p1-bad").problem;
  CHECK(fails_with_rule(spec, "missing-requirement"));

  // Non-S5 init (empty relation is not reflexive) breaks the baseline.
  std::string broken = problem_text;
  broken.replace(broken.find(":relations (A (u u))"), std::string(":relations (A (u u))").size(),
                 ":relations ()");
  spec.problem = *parse_text(broken, "p1-frame").problem;
  CHECK(fails_with_rule(spec, "baseline-violation"));
}
