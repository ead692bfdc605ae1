#include "epddl/requirements.hpp"

#include <map>

#include "epddl/errors.hpp"

namespace epddl {

namespace {

// Formula-feature contexts; ":negative-" + kContexts[i] etc. are valid keys.
const std::vector<std::string> kContexts = {
    "preconditions", "postconditions", "obs-conditions", "goals", "list-formulas"};
const std::vector<std::string> kFeatures = {
    "negative", "disjunctive", "existential", "universal", "quantified", "modal", "general"};

std::map<std::string, std::vector<std::string>> implication_table() {
  std::map<std::string, std::vector<std::string>> implies;
  for (const auto& ctx : kContexts) {
    implies[":negative-" + ctx] = {":disjunctive-" + ctx};
    implies[":quantified-" + ctx] = {":universal-" + ctx, ":existential-" + ctx};
    if (ctx == "list-formulas")
      implies[":general-" + ctx] = {":negative-" + ctx, ":disjunctive-" + ctx,
                                    ":quantified-" + ctx};
    else
      implies[":general-" + ctx] = {":negative-" + ctx, ":disjunctive-" + ctx,
                                    ":quantified-" + ctx, ":modal-" + ctx};
  }
  // Each postconditions requirement implies :conditional-effects.
  for (const auto& feature : kFeatures)
    implies[":" + feature + "-postconditions"].push_back(":conditional-effects");
  // The *-formulas keys abbreviate the same feature in every context.
  for (const auto& feature : kFeatures) {
    std::vector<std::string>& all = implies[":" + feature + "-formulas"];
    for (const auto& ctx : kContexts) {
      if (feature == "modal" && ctx == "list-formulas") continue;
      all.push_back(":" + feature + "-" + ctx);
    }
  }
  implies[":del"] = {":typing",        ":equality",       ":partial-observability",
                     ":ontic-actions", ":multi-pointed-models", ":general-frames",
                     ":general-formulas"};
  implies[":finitary-S5-theories"] = {":common-knowledge", ":knowing-whether"};
  implies[":common-knowledge"] = {":group-modalities"};
  implies[":static-common-knowledge"] = {":group-modalities", ":facts"};
  implies[":agent-groups"] = {":lists"};
  implies[":group-modalities"] = {":lists"};
  return implies;
}

RequirementSet build_all_keys() {
  RequirementSet keys = {
      ":agent-groups", ":common-knowledge", ":conditional-effects", ":del",
      ":equality", ":events-conditions", ":facts", ":finitary-S5-theories",
      ":general-frames", ":group-modalities", ":KD45-frames", ":knowing-whether",
      ":lists", ":list-comprehensions", ":multi-pointed-models", ":ontic-actions",
      ":pal", ":partial-observability", ":static-common-knowledge", ":typing",
  };
  for (const auto& feature : kFeatures) {
    keys.insert(":" + feature + "-formulas");
    for (const auto& ctx : kContexts) {
      if (feature == "modal" && ctx == "list-formulas") continue;
      keys.insert(":" + feature + "-" + ctx);
    }
  }
  return keys;
}

}  // namespace

const RequirementSet& all_requirement_keys() {
  static const RequirementSet keys = build_all_keys();
  return keys;
}

RequirementSet resolve_requirements(const std::vector<std::string>& declared) {
  static const auto implies = implication_table();
  const RequirementSet& known = all_requirement_keys();

  RequirementSet out = {":pal"};
  std::vector<std::string> frontier = declared;
  while (!frontier.empty()) {
    std::string key = frontier.back();
    frontier.pop_back();
    if (!known.count(key)) throw GroundError("unknown requirement key '" + key + "'");
    if (!out.insert(key).second) continue;
    auto it = implies.find(key);
    if (it != implies.end())
      for (const auto& implied : it->second) frontier.push_back(implied);
  }
  return out;
}

}  // namespace epddl
