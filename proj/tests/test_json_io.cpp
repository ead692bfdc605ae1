#include "doctest.h"

#include "epddl/errors.hpp"
#include "epddl/ground.hpp"
#include "epddl/json_io.hpp"
#include "epddl/typecheck.hpp"
#include "json.hpp"
#include "support/files.hpp"

using namespace epddl;
using Json = nlohmann::ordered_json;

namespace {

GroundTask& ebw1_task() {
  static GroundTask task = build_task(type_check(files::ebw1_spec()));
  return task;
}

}  // namespace

TEST_CASE("document shape") {
  std::string text = emit_json(ebw1_task());
  Json doc = Json::parse(text);

  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    keys.push_back(key);
  }
  CHECK(keys == std::vector<std::string>{"planning-task-info", "language", "facts",
                                         "initial-state", "actions", "goal"});

  const Json& info = doc["planning-task-info"];
  CHECK(info["problem"] == "ebw1");
  CHECK(info["domain"] == "epistemic-blocks-world");
  CHECK(info["libraries"] == Json::array({"my-library"}));
  CHECK(info["agents-number"] == 3);
  CHECK(info["atoms-number"] == 35);
  CHECK(info["actions-number"] == 504);
  CHECK(info["initial-worlds-number"] == 3);
  CHECK(info["facts-number"] == 0);
  CHECK(info["goal-modal-depth"] == 1);
  CHECK(info["goal-size"] == 2);

  // Counts agree with the collections.
  CHECK(doc["language"]["agents"].size() == 3);
  CHECK(doc["language"]["atoms"].size() == 35);
  CHECK(doc["actions"].size() == 504);
  CHECK(doc["initial-state"]["worlds"].size() == 3);
  CHECK(doc["facts"].size() == 0);

  // Goal: C.box over all three agents of the canonical atom.
  CHECK(doc["goal"]["modality-name"] == "C.box");
  CHECK(doc["goal"]["modality-index"] == Json::array({"A", "L", "R"}));
  CHECK(doc["goal"]["formula"] == "on_b2_b1");

  // Events with no declared effects serialize as null, others sparsely.
  const Json& tell = doc["actions"]["tell_A,b2,b1"];
  CHECK(tell["effects"]["e-tell_A,b2,b1"].is_null());
  const Json& move = doc["actions"]["move_A,b2,b1,b3"];
  CHECK(move["effects"]["nil"].is_null());
  CHECK(move["effects"]["e-move_b2,b1,b3"]["on_b2_b3"]["formula"] == "true");
  CHECK(move["effects"]["e-move_b2,b1,b3"].size() == 4);

  // Omitted observability entries mean false.
  CHECK(move["observability-conditions"]["A"].contains("Fully"));
  CHECK(!move["observability-conditions"]["A"].contains("Oblivious"));

  // Nested world-to-array relation encoding.
  CHECK(doc["initial-state"]["relations"]["A"]["w1"] ==
        Json::array({"w1", "w2", "w3"}));
  CHECK(doc["initial-state"]["relations"]["L"]["w1"] == Json::array({"w1"}));
}

TEST_CASE("byte determinism") {
  std::string a = emit_json(ebw1_task());
  std::string b = emit_json(ebw1_task());
  CHECK(a == b);
  CHECK(a.find(" \n") == std::string::npos);  // no trailing whitespace
  CHECK(a.back() == '\n');
}

TEST_CASE("read inverts emit on golden tasks") {
  for (const auto spec_fn :
       {files::ebw1_spec, files::planning_spec, files::distracted_spec}) {
    GroundTask task = build_task(type_check(spec_fn()));
    std::string text = emit_json(task);
    GroundTask back = read_json(text);
    CHECK(emit_json(back) == text);

    CHECK(back.atoms == task.atoms);
    CHECK(back.agents == task.agents);
    CHECK(back.facts.atoms == task.facts.atoms);
    CHECK(states_equal(back.initial, task.initial));
    CHECK(equal(back.goal, task.goal));
    REQUIRE(back.actions.size() == task.actions.size());
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
      CHECK(back.actions[i].first == task.actions[i].first);
      CHECK(back.actions[i].second == task.actions[i].second);
    }
  }
}

TEST_CASE("schema violations carry JSON paths") {
  std::string text = emit_json(ebw1_task());

  CHECK_THROWS_AS(read_json("{"), SchemaError);
  CHECK_THROWS_WITH_AS(read_json("{}"), doctest::Contains("planning-task-info"), SchemaError);

  {
    Json doc = Json::parse(text);
    doc["initial-state"].erase("designated");
    CHECK_THROWS_WITH_AS(read_json(doc.dump()), doctest::Contains("designated"), SchemaError);
  }
  {
    Json doc = Json::parse(text);
    doc["goal"]["modality-name"] = "Kw.circle";
    CHECK_THROWS_WITH_AS(read_json(doc.dump()), doctest::Contains("modality-name"), SchemaError);
  }
  {
    Json doc = Json::parse(text);
    doc["goal"] = Json::object({{"connective", "xor"}, {"formulas", Json::array({"true"})}});
    CHECK_THROWS_AS(read_json(doc.dump()), SchemaError);
  }
  {
    Json doc = Json::parse(text);
    doc["planning-task-info"]["agents-number"] = -1;
    CHECK_THROWS_AS(read_json(doc.dump()), SchemaError);
  }
  {
    Json doc = Json::parse(text);
    doc["initial-state"]["designated"] = Json::array({"w9"});
    CHECK_THROWS_AS(read_json(doc.dump()), SchemaError);
  }
}
