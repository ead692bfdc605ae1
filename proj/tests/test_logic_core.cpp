#include "doctest.h"

#include <algorithm>

#include "epddl/bisim.hpp"
#include "epddl/errors.hpp"
#include "epddl/state.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"

using namespace epddl;

namespace {

FormulaPtr nobody_knows_where_b1_is(const std::vector<AgentId>& group) {
  std::vector<FormulaPtr> parts;
  for (const auto& i : group)
    for (const auto& b : {"b2", "b3", "b4"})
      parts.push_back(Formula::negate(golden::box(i, golden::atom(std::string("on_") + b + "_b1"))));
  return Formula::conj(std::move(parts));
}

EpistemicState nondet_two_worlds() {
  EpistemicState s;
  s.agents = {"A", "L", "R"};
  s.worlds = {"w1", "w2"};
  s.labels["w1"] = {"on_b2_b1"};
  s.labels["w2"] = {"on_b3_b1"};
  for (const auto& i : s.agents) s.relations[i] = {{"w1", "w1"}, {"w2", "w2"}};
  s.designated = {"w1", "w2"};
  return s;
}

}  // namespace

TEST_CASE("truth at a world: blocks-world goldens") {
  EpistemicState s = golden::multi_agent_bw();

  CHECK(evaluate_at_world(s, "w1", Formula::truth()));
  CHECK(evaluate_at_world(s, "w1", golden::atom("on_b2_b1")));
  CHECK_FALSE(evaluate_at_world(s, "w2", golden::atom("on_b2_b1")));

  // l knows that a and r do not know where the missing block is.
  CHECK(evaluate_at_world(s, "w1", golden::box("L", nobody_knows_where_b1_is({"A", "R"}))));
  // l itself does know on(b2,b1) at w1, so the same statement about l fails.
  CHECK_FALSE(evaluate_at_world(s, "w1", golden::box("L", nobody_knows_where_b1_is({"L"}))));
}

TEST_CASE("common knowledge goldens") {
  EpistemicState s = golden::multi_agent_bw();
  FormulaPtr clear_tops = golden::conj(
      {golden::atom("clear_b2"), golden::atom("clear_b3"), golden::atom("clear_b4")});
  CHECK(evaluate_at_world(
      s, "w1", Formula::modal_group(ModalKind::CKBox, {"A", "L", "R"}, clear_tops)));
  FormulaPtr psi = golden::conj({golden::atom("on_b1_c1"), golden::atom("on_b2_b1")});
  CHECK_FALSE(
      evaluate_at_world(s, "w1", Formula::modal_group(ModalKind::CKBox, {"A", "L", "R"}, psi)));
}

TEST_CASE("multi-pointed truth") {
  EpistemicState local = golden::s_r();
  CHECK_FALSE(evaluate(local, golden::box("L", golden::atom("on_b2_b1"))));

  EpistemicState global = golden::multi_agent_bw();
  // Single designated world: evaluate agrees with evaluate_at_world.
  gen::Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    FormulaPtr phi = gen::formula(rng, global.agents, gen::atoms(4), 2);
    CHECK(evaluate(global, phi) == evaluate_at_world(global, "w1", phi));
  }

  // s' of the non-deterministic example: everyone considers both spots possible.
  EpistemicState blurred = nondet_two_worlds();
  for (const auto& i : blurred.agents) {
    blurred.relations[i].insert({"w1", "w2"});
    blurred.relations[i].insert({"w2", "w1"});
  }
  std::vector<FormulaPtr> possible;
  for (const auto& i : blurred.agents) {
    possible.push_back(Formula::modal(ModalKind::Diamond, i, golden::atom("on_b2_b1")));
    possible.push_back(Formula::modal(ModalKind::Diamond, i, golden::atom("on_b3_b1")));
  }
  CHECK(evaluate(blurred, Formula::conj(possible)));
}

TEST_CASE("evaluate error paths") {
  EpistemicState s = golden::multi_agent_bw();
  CHECK_THROWS_AS(evaluate_at_world(s, "nope", Formula::truth()), ModelError);
  CHECK_THROWS_AS(evaluate_at_world(s, "w1", golden::box("X", Formula::truth())), ModelError);
  // Atoms outside every label are legal and false.
  CHECK_FALSE(evaluate_at_world(s, "w1", golden::atom("ghost")));
}

TEST_CASE("frame report") {
  CHECK(frame_report(golden::multi_agent_bw()).classification == FrameClass::S5);

  EpistemicState single;
  single.agents = {"A"};
  single.worlds = {"w"};
  single.labels["w"] = {};
  single.designated = {"w"};
  FrameReport r = frame_report(single);
  CHECK(r.per_agent.at("A").transitive);
  CHECK(r.per_agent.at("A").euclidean);
  CHECK_FALSE(r.per_agent.at("A").serial);
  CHECK(r.classification == FrameClass::Neither);

  // Serial, transitive, euclidean but not reflexive: w1 -> w2 -> w2.
  EpistemicState belief;
  belief.agents = {"A"};
  belief.worlds = {"w1", "w2"};
  belief.labels["w1"] = {"p"};
  belief.labels["w2"] = {};
  belief.relations["A"] = {{"w1", "w2"}, {"w2", "w2"}};
  belief.designated = {"w1"};
  FrameReport rb = frame_report(belief);
  CHECK(rb.classification == FrameClass::KD45);
  CHECK_FALSE(rb.per_agent.at("A").reflexive);
}

TEST_CASE("S5 classification implies the KD45 flag set") {
  gen::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    EpistemicState s = gen::state(rng);
    FrameReport r = frame_report(s);
    if (r.classification == FrameClass::S5)
      for (const auto& [agent, flags] : r.per_agent) {
        (void)agent;
        CHECK(flags.serial);
        CHECK(flags.transitive);
        CHECK(flags.euclidean);
      }
  }
}

TEST_CASE("disjoint union") {
  EpistemicState target = nondet_two_worlds();

  EpistemicState part1, part2;
  for (auto* p : {&part1, &part2}) p->agents = target.agents;
  part1.worlds = {"w1"};
  part1.labels["w1"] = {"on_b2_b1"};
  part2.worlds = {"w2"};
  part2.labels["w2"] = {"on_b3_b1"};
  for (const auto& i : target.agents) {
    part1.relations[i] = {{"w1", "w1"}};
    part2.relations[i] = {{"w2", "w2"}};
  }
  part1.designated = {"w1"};
  part2.designated = {"w2"};

  EpistemicState joined = disjoint_union({part1, part2});
  CHECK(joined.worlds.size() == 2);
  CHECK(bisimilar(joined, target));

  EpistemicState twice = disjoint_union({target, target});
  CHECK(twice.worlds.size() == 2 * target.worlds.size());
  CHECK(twice.designated.size() == 2 * target.designated.size());

  // evaluate(union, phi) equals the conjunction over the components.
  gen::Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    EpistemicState a = gen::state(rng);
    EpistemicState b = gen::state(rng);
    EpistemicState u = disjoint_union({a, b});
    FormulaPtr phi = gen::formula(rng, a.agents, gen::atoms(6), 2);
    CHECK(evaluate(u, phi) == (evaluate(a, phi) && evaluate(b, phi)));
  }
}

TEST_CASE("bisimilarity basics") {
  EpistemicState s = golden::multi_agent_bw();
  EpistemicState renamed;
  renamed.agents = s.agents;
  auto rn = [](const WorldId& w) { return "x" + w.substr(1); };
  for (const auto& w : s.worlds) {
    renamed.worlds.push_back(rn(w));
    renamed.labels[rn(w)] = s.labels.at(w);
  }
  for (const auto& [agent, rel] : s.relations)
    for (const auto& [a, b] : rel) renamed.relations[agent].insert({rn(a), rn(b)});
  for (const auto& d : s.designated) renamed.designated.insert(rn(d));
  CHECK(bisimilar(s, renamed));

  EpistemicState one, other;
  for (auto* p : {&one, &other}) {
    p->agents = {"A"};
    p->worlds = {"w"};
    p->designated = {"w"};
  }
  one.labels["w"] = {"p"};
  other.labels["w"] = {"q"};
  CHECK_FALSE(bisimilar(one, other));
}

TEST_CASE("bisimilarity is an equivalence on a random sample") {
  gen::Rng rng(31);
  std::vector<EpistemicState> sample;
  for (int k = 0; k < 12; ++k) sample.push_back(gen::state(rng));
  for (const auto& s : sample) CHECK(bisimilar(s, s));
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j)
      CHECK(bisimilar(sample[i], sample[j]) == bisimilar(sample[j], sample[i]));
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j)
      for (std::size_t k = 0; k < sample.size(); ++k)
        if (bisimilar(sample[i], sample[j]) && bisimilar(sample[j], sample[k]))
          CHECK(bisimilar(sample[i], sample[k]));
}

TEST_CASE("bisimilar states satisfy the same formulas up to depth 3") {
  gen::Rng rng(37);
  int bisimilar_pairs = 0;
  for (int k = 0; k < 220; ++k) {
    EpistemicState a = gen::state(rng, 3, 2, 2);
    EpistemicState b = gen::state(rng, 3, 2, 2);
    if (!bisimilar(a, b)) continue;
    ++bisimilar_pairs;
    for (int t = 0; t < 25; ++t) {
      FormulaPtr phi = gen::formula(rng, a.agents, gen::atoms(2), 3);
      CHECK(evaluate(a, phi) == evaluate(b, phi));
    }
  }
  CHECK(bisimilar_pairs > 0);
}

TEST_CASE("pointing analysis") {
  CHECK(analyze_pointing(golden::multi_agent_bw()).global);

  PointingReport local = analyze_pointing(golden::s_r());
  CHECK_FALSE(local.global);
  CHECK(local.local_for == std::set<AgentId>{"R"});

  PointingReport after_ann = analyze_pointing(golden::s_prime_r());
  CHECK_FALSE(after_ann.global);
  CHECK(after_ann.local_for.count("A"));
  CHECK(after_ann.local_for.count("R"));

  CHECK(analyze_pointing(nondet_two_worlds()).nondeterministic);

  // Cross edges merge the components: no longer non-deterministic.
  EpistemicState blurred = nondet_two_worlds();
  for (const auto& i : blurred.agents) {
    blurred.relations[i].insert({"w1", "w2"});
    blurred.relations[i].insert({"w2", "w1"});
  }
  CHECK_FALSE(analyze_pointing(blurred).nondeterministic);
}

TEST_CASE("canonical keys") {
  EpistemicState s = golden::multi_agent_bw();
  EpistemicState renamed;
  renamed.agents = s.agents;
  auto rn = [&](const WorldId& w) -> WorldId {
    if (w == "w1") return "a";
    if (w == "w2") return "b";
    return "c";
  };
  for (const auto& w : s.worlds) {
    renamed.worlds.push_back(rn(w));
    renamed.labels[rn(w)] = s.labels.at(w);
  }
  for (const auto& [agent, rel] : s.relations)
    for (const auto& [x, y] : rel) renamed.relations[agent].insert({rn(x), rn(y)});
  for (const auto& d : s.designated) renamed.designated.insert(rn(d));
  CHECK(canonical_key(s) == canonical_key(renamed));

  // Two bisimilar worlds contract to the one-world quotient.
  EpistemicState dup;
  dup.agents = {"A"};
  dup.worlds = {"u", "v"};
  dup.labels["u"] = {"p"};
  dup.labels["v"] = {"p"};
  dup.relations["A"] = {{"u", "v"}, {"v", "u"}, {"u", "u"}, {"v", "v"}};
  dup.designated = {"u"};
  EpistemicState quotient;
  quotient.agents = {"A"};
  quotient.worlds = {"w"};
  quotient.labels["w"] = {"p"};
  quotient.relations["A"] = {{"w", "w"}};
  quotient.designated = {"w"};
  CHECK(contract(dup).worlds.size() == 1);
  CHECK(canonical_key(dup) == canonical_key(quotient));
}

TEST_CASE("key equality coincides with bisimilarity on random pairs") {
  gen::Rng rng(41);
  for (int k = 0; k < 100; ++k) {
    EpistemicState a = gen::state(rng, 4, 2, 3);
    EpistemicState b = gen::state(rng, 4, 2, 3);
    CHECK((canonical_key(a) == canonical_key(b)) == bisimilar(a, b));
  }
  // The agent vector's order is presentation, not language.
  EpistemicState s = golden::multi_agent_bw();
  EpistemicState shuffled = s;
  shuffled.agents = {"R", "A", "L"};
  CHECK(canonical_key(s) == canonical_key(shuffled));
}

TEST_CASE("modal dualities") {
  gen::Rng rng(43);
  std::vector<AgentId> agents = gen::agents(3);
  std::vector<Atom> universe = gen::atoms(4);
  for (int k = 0; k < 120; ++k) {
    EpistemicState s = gen::state(rng, 5, 3, 4);
    FormulaPtr phi = gen::formula(rng, agents, universe, 2);
    AgentId i = agents[rng.below(3)];
    std::vector<AgentId> group = {agents[rng.below(3)], agents[rng.below(3)]};

    FormulaPtr diamond = Formula::modal(ModalKind::Diamond, i, phi);
    FormulaPtr not_box_not =
        Formula::negate(Formula::modal(ModalKind::Box, i, Formula::negate(phi)));
    CHECK(evaluate(s, diamond) == evaluate(s, not_box_not));

    FormulaPtr ck_diamond = Formula::modal_group(ModalKind::CKDiamond, group, phi);
    FormulaPtr not_ck_not = Formula::negate(
        Formula::modal_group(ModalKind::CKBox, group, Formula::negate(phi)));
    CHECK(evaluate(s, ck_diamond) == evaluate(s, not_ck_not));

    FormulaPtr kw_diamond = Formula::modal_group(ModalKind::KwDiamond, group, phi);
    FormulaPtr not_kw_not = Formula::negate(
        Formula::modal_group(ModalKind::KwBox, group, Formula::negate(phi)));
    CHECK(evaluate(s, kw_diamond) == evaluate(s, not_kw_not));
  }
}

TEST_CASE("group box is the conjunction over members") {
  gen::Rng rng(47);
  std::vector<AgentId> agents = gen::agents(3);
  for (int k = 0; k < 100; ++k) {
    EpistemicState s = gen::state(rng);
    FormulaPtr phi = gen::formula(rng, agents, gen::atoms(6), 2);
    std::vector<AgentId> group;
    for (const auto& i : agents)
      if (rng.chance(0.6)) group.push_back(i);
    if (group.empty()) group.push_back(agents[0]);
    FormulaPtr grouped = Formula::modal_group(ModalKind::Box, group, phi);
    std::vector<FormulaPtr> each;
    for (const auto& i : group) each.push_back(Formula::modal(ModalKind::Box, i, phi));
    CHECK(evaluate(s, grouped) == evaluate(s, Formula::conj(each)));
  }
}

TEST_CASE("common knowledge agrees with the bounded conjunction on small models") {
  gen::Rng rng(53);
  std::vector<AgentId> agents = gen::agents(3);
  for (int k = 0; k < 80; ++k) {
    EpistemicState s = gen::state(rng, 6, 3, 3);
    FormulaPtr phi = gen::formula(rng, agents, gen::atoms(3), 1);
    std::vector<AgentId> group;
    for (const auto& i : agents)
      if (rng.chance(0.7)) group.push_back(i);
    if (group.empty()) group.push_back(agents[0]);

    // CK_G phi == B_G^1 phi & ... & B_G^|W| phi: reachability saturates at |W|.
    std::vector<FormulaPtr> levels;
    FormulaPtr nested = phi;
    for (std::size_t depth = 0; depth < s.worlds.size(); ++depth) {
      nested = Formula::modal_group(ModalKind::Box, group, nested);
      levels.push_back(nested);
    }
    FormulaPtr ck = Formula::modal_group(ModalKind::CKBox, group, phi);
    CHECK(evaluate(s, ck) == evaluate(s, Formula::conj(levels)));
  }
}

TEST_CASE("state invariants") {
  EpistemicState s = golden::multi_agent_bw();
  CHECK_NOTHROW(s.validate());
  EpistemicState broken = s;
  broken.designated.clear();
  CHECK_THROWS_AS(broken.validate(), ModelError);
  broken = s;
  broken.relations["A"].insert({"w1", "nope"});
  CHECK_THROWS_AS(broken.validate(), ModelError);
}
