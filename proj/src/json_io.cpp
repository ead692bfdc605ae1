#include "epddl/json_io.hpp"

#include <algorithm>

#include "epddl/errors.hpp"
#include "json.hpp"

namespace epddl {

namespace {

using Json = nlohmann::ordered_json;

Json formula_to_json(const FormulaPtr& f) {
  switch (f->tag) {
    case Formula::Tag::True:
      return "true";
    case Formula::Tag::False:
      return "false";
    case Formula::Tag::Atom:
      return f->atom;
    case Formula::Tag::Not: {
      Json out;
      out["connective"] = "not";
      out["formula"] = formula_to_json(f->children[0]);
      return out;
    }
    case Formula::Tag::And:
    case Formula::Tag::Or:
    case Formula::Tag::Imply: {
      Json out;
      out["connective"] = f->tag == Formula::Tag::And   ? "and"
                          : f->tag == Formula::Tag::Or ? "or"
                                                       : "imply";
      Json parts = Json::array();
      for (const auto& c : f->children) parts.push_back(formula_to_json(c));
      out["formulas"] = std::move(parts);
      return out;
    }
    case Formula::Tag::Modal: {
      Json out;
      out["modality-name"] = modal_kind_name(f->kind);
      if (f->group_index) {
        Json index = Json::array();
        for (const auto& i : f->index) index.push_back(i);
        out["modality-index"] = std::move(index);
      } else {
        out["modality-index"] = f->index.front();
      }
      out["formula"] = formula_to_json(f->children[0]);
      return out;
    }
  }
  return nullptr;
}

Json relations_to_json(const std::vector<std::string>& keys,
                       const std::vector<std::string>& points,
                       const std::map<std::string, std::set<std::pair<std::string, std::string>>>&
                           relations) {
  Json out = Json::object();
  for (const auto& key : keys) {
    Json per_point = Json::object();
    auto it = relations.find(key);
    for (const auto& from : points) {
      Json successors = Json::array();
      if (it != relations.end())
        for (const auto& to : points)
          if (it->second.count({from, to})) successors.push_back(to);
      per_point[from] = std::move(successors);
    }
    out[key] = std::move(per_point);
  }
  return out;
}

Json state_to_json(const EpistemicState& state) {
  Json out;
  out["worlds"] = state.worlds;
  out["relations"] = relations_to_json(state.agents, state.worlds, state.relations);
  Json labels = Json::object();
  for (const auto& w : state.worlds) {
    Json atoms = Json::array();
    for (const auto& atom : state.labels.at(w)) atoms.push_back(atom);
    labels[w] = std::move(atoms);
  }
  out["labels"] = std::move(labels);
  Json designated = Json::array();
  for (const auto& w : state.worlds)
    if (state.designated.count(w)) designated.push_back(w);
  out["designated"] = std::move(designated);
  return out;
}

Json action_to_json(const AbstractAction& action, const std::vector<AgentId>& agents) {
  Json out;
  out["action-type"] = action.type_name;
  out["events"] = action.events;
  out["relations"] = relations_to_json(action.obs_types, action.events, action.typed_relations);
  Json designated = Json::array();
  for (const auto& e : action.events)
    if (action.designated.count(e)) designated.push_back(e);
  out["designated"] = std::move(designated);

  Json preconditions = Json::object();
  for (const auto& e : action.events) {
    Json pre;
    pre["formula"] = formula_to_json(action.data.at(e).pre);
    preconditions[e] = std::move(pre);
  }
  out["preconditions"] = std::move(preconditions);

  Json effects = Json::object();
  for (const auto& e : action.events) {
    const auto& post = action.data.at(e).post;
    if (post.empty()) {
      effects[e] = nullptr;
    } else {
      Json per_atom = Json::object();
      for (const auto& [atom, phi] : post) {
        Json entry;
        entry["formula"] = formula_to_json(phi);
        per_atom[atom] = std::move(entry);
      }
      effects[e] = std::move(per_atom);
    }
  }
  out["effects"] = std::move(effects);

  Json obs = Json::object();
  for (const auto& agent : agents) {
    Json per_type = Json::object();
    auto it = action.obs.find(agent);
    if (it != action.obs.end())
      for (const auto& t : action.obs_types) {
        auto cit = it->second.find(t);
        if (cit == it->second.end()) continue;  // omitted = false
        Json entry;
        entry["formula"] = formula_to_json(cit->second);
        per_type[t] = std::move(entry);
      }
    obs[agent] = std::move(per_type);
  }
  out["observability-conditions"] = std::move(obs);
  return out;
}

// --- reading ---

[[noreturn]] void bad(const std::string& path, const std::string& message) {
  throw SchemaError(path, message);
}

const Json& field(const Json& object, const std::string& path, const std::string& key) {
  if (!object.is_object()) bad(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) bad(path, "missing key \"" + key + "\"");
  return *it;
}

std::string get_string(const Json& value, const std::string& path) {
  if (!value.is_string()) bad(path, "expected a string");
  return value.get<std::string>();
}

int get_count(const Json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0)
    bad(path, "expected a non-negative integer");
  return value.get<int>();
}

std::vector<std::string> get_string_array(const Json& value, const std::string& path) {
  if (!value.is_array()) bad(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i)
    out.push_back(get_string(value[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

FormulaPtr json_to_formula(const Json& value, const std::string& path) {
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    if (text == "true") return Formula::truth();
    if (text == "false") return Formula::falsity();
    return Formula::make_atom(text);
  }
  if (!value.is_object()) bad(path, "expected a formula (string or object)");
  if (value.contains("connective")) {
    std::string connective = get_string(field(value, path, "connective"), path + ".connective");
    if (connective == "not")
      return Formula::negate(json_to_formula(field(value, path, "formula"), path + ".formula"));
    const Json& parts = field(value, path, "formulas");
    if (!parts.is_array() || parts.empty()) bad(path + ".formulas", "expected a non-empty array");
    std::vector<FormulaPtr> children;
    for (std::size_t i = 0; i < parts.size(); ++i)
      children.push_back(json_to_formula(parts[i], path + ".formulas[" + std::to_string(i) + "]"));
    if (connective == "and") return Formula::conj(std::move(children));
    if (connective == "or") return Formula::disj(std::move(children));
    if (connective == "imply") {
      if (children.size() != 2) bad(path + ".formulas", "\"imply\" takes exactly two formulas");
      return Formula::implies(children[0], children[1]);
    }
    bad(path + ".connective", "unknown connective \"" + connective + "\"");
  }
  if (value.contains("modality-name")) {
    std::string name = get_string(field(value, path, "modality-name"), path + ".modality-name");
    ModalKind kind;
    if (name == "box") kind = ModalKind::Box;
    else if (name == "diamond") kind = ModalKind::Diamond;
    else if (name == "Kw.box") kind = ModalKind::KwBox;
    else if (name == "Kw.diamond") kind = ModalKind::KwDiamond;
    else if (name == "C.box") kind = ModalKind::CKBox;
    else if (name == "C.diamond") kind = ModalKind::CKDiamond;
    else bad(path + ".modality-name", "unknown modality name \"" + name + "\"");
    const Json& index = field(value, path, "modality-index");
    FormulaPtr body = json_to_formula(field(value, path, "formula"), path + ".formula");
    if (index.is_string()) return Formula::modal(kind, index.get<std::string>(), std::move(body));
    if (index.is_array()) {
      auto agents = get_string_array(index, path + ".modality-index");
      if (agents.empty()) bad(path + ".modality-index", "modality index must be non-empty");
      return Formula::modal_group(kind, std::move(agents), std::move(body));
    }
    bad(path + ".modality-index", "expected a string or an array of strings");
  }
  bad(path, "formula object needs \"connective\" or \"modality-name\"");
}

/// Returns the relation keys in document order alongside the pair sets.
std::vector<std::string> read_relations(
    const Json& value, const std::string& path,
    std::map<std::string, std::set<std::pair<std::string, std::string>>>& out) {
  if (!value.is_object()) bad(path, "expected an object");
  std::vector<std::string> order;
  for (const auto& [key, per_point] : value.items()) {
    order.push_back(key);
    if (!per_point.is_object()) bad(path + "." + key, "expected an object");
    for (const auto& [from, successors] : per_point.items()) {
      auto to_list = get_string_array(successors, path + "." + key + "." + from);
      for (const auto& to : to_list) out[key].insert({from, to});
    }
    if (!out.count(key)) out[key];  // keep empty relations
  }
  return order;
}

EpistemicState json_to_state(const Json& value, const std::string& path,
                             const std::vector<AgentId>& agents) {
  EpistemicState state;
  state.agents = agents;
  state.worlds = get_string_array(field(value, path, "worlds"), path + ".worlds");
  std::map<std::string, std::set<std::pair<std::string, std::string>>> relations;
  read_relations(field(value, path, "relations"), path + ".relations", relations);
  for (auto& [agent, pairs] : relations) {
    if (pairs.empty()) continue;
    state.relations[agent] = std::move(pairs);
  }
  const Json& labels = field(value, path, "labels");
  if (!labels.is_object()) bad(path + ".labels", "expected an object");
  for (const auto& w : state.worlds) state.labels[w];
  for (const auto& [world, atoms] : labels.items()) {
    auto list = get_string_array(atoms, path + ".labels." + world);
    state.labels[world] = std::set<Atom>(list.begin(), list.end());
  }
  auto designated = get_string_array(field(value, path, "designated"), path + ".designated");
  state.designated = std::set<WorldId>(designated.begin(), designated.end());
  try {
    state.validate();
  } catch (const ModelError& e) {
    bad(path, e.what());
  }
  return state;
}

AbstractAction json_to_action(const Json& value, const std::string& path,
                              const std::string& name) {
  AbstractAction action;
  action.name = name;
  action.type_name = get_string(field(value, path, "action-type"), path + ".action-type");
  action.events = get_string_array(field(value, path, "events"), path + ".events");
  if (action.events.empty()) bad(path + ".events", "an action needs at least one event");

  std::map<std::string, std::set<std::pair<std::string, std::string>>> relations;
  action.obs_types =
      read_relations(field(value, path, "relations"), path + ".relations", relations);
  for (auto& [type, pairs] : relations)
    if (!pairs.empty()) action.typed_relations[type] = std::move(pairs);

  auto designated =
      get_string_array(field(value, path, "designated"), path + ".designated");
  if (designated.empty()) bad(path + ".designated", "designated event set must be non-empty");
  action.designated = std::set<EventId>(designated.begin(), designated.end());

  const Json& preconditions = field(value, path, "preconditions");
  if (!preconditions.is_object()) bad(path + ".preconditions", "expected an object");
  for (const auto& e : action.events) action.data[e].pre = Formula::truth();
  for (const auto& [event, pre] : preconditions.items()) {
    std::string sub = path + ".preconditions." + event;
    if (!std::count(action.events.begin(), action.events.end(), event))
      bad(sub, "precondition for unknown event");
    action.data[event].pre = json_to_formula(field(pre, sub, "formula"), sub + ".formula");
  }

  const Json& effects = field(value, path, "effects");
  if (!effects.is_object()) bad(path + ".effects", "expected an object");
  for (const auto& [event, per_atom] : effects.items()) {
    std::string sub = path + ".effects." + event;
    if (!std::count(action.events.begin(), action.events.end(), event))
      bad(sub, "effects for unknown event");
    if (per_atom.is_null()) continue;
    if (!per_atom.is_object()) bad(sub, "expected null or an object");
    for (const auto& [atom, entry] : per_atom.items()) {
      FormulaPtr phi = json_to_formula(field(entry, sub + "." + atom, "formula"),
                                       sub + "." + atom + ".formula");
      EffectClause clause{EffectClause::Kind::Iff, true, phi};
      action.data[event].post[atom] = phi;
      action.data[event].post_clauses[atom] = {clause};
    }
  }

  const Json& obs = field(value, path, "observability-conditions");
  if (!obs.is_object()) bad(path + ".observability-conditions", "expected an object");
  for (const auto& [agent, per_type] : obs.items()) {
    std::string sub = path + ".observability-conditions." + agent;
    if (!per_type.is_object()) bad(sub, "expected an object");
    action.obs[agent];
    for (const auto& [type, entry] : per_type.items()) {
      if (!std::count(action.obs_types.begin(), action.obs_types.end(), type))
        bad(sub + "." + type, "unknown observability type");
      action.obs[agent][type] =
          json_to_formula(field(entry, sub + "." + type, "formula"), sub + "." + type + ".formula");
    }
  }
  return action;
}

}  // namespace

std::string emit_json(const GroundTask& task) {
  Json doc;
  Json info;
  info["problem"] = task.info.problem;
  info["domain"] = task.info.domain;
  info["libraries"] = task.info.libraries;
  info["requirements"] = task.info.requirements;
  info["agents-number"] = task.info.agents_number;
  info["atoms-number"] = task.info.atoms_number;
  info["facts-number"] = task.info.facts_number;
  info["actions-number"] = task.info.actions_number;
  info["initial-worlds-number"] = task.info.initial_worlds_number;
  info["goal-modal-depth"] = task.info.goal_modal_depth;
  info["goal-size"] = task.info.goal_size;
  doc["planning-task-info"] = std::move(info);

  Json language;
  language["atoms"] = task.atoms;
  language["agents"] = task.agents;
  doc["language"] = std::move(language);

  Json facts = Json::array();
  for (const auto& f : task.facts.atoms) facts.push_back(f);
  doc["facts"] = std::move(facts);

  doc["initial-state"] = state_to_json(task.initial);

  Json actions = Json::object();
  for (const auto& [name, action] : task.actions)
    actions[name] = action_to_json(action, task.agents);
  doc["actions"] = std::move(actions);

  doc["goal"] = formula_to_json(task.goal);
  return doc.dump(2) + "\n";
}

GroundTask read_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
  const std::string root = "$";
  GroundTask task;

  const Json& info = field(doc, root, "planning-task-info");
  const std::string ipath = root + ".planning-task-info";
  task.info.problem = get_string(field(info, ipath, "problem"), ipath + ".problem");
  task.info.domain = get_string(field(info, ipath, "domain"), ipath + ".domain");
  task.info.libraries = get_string_array(field(info, ipath, "libraries"), ipath + ".libraries");
  task.info.requirements =
      get_string_array(field(info, ipath, "requirements"), ipath + ".requirements");
  task.info.agents_number =
      get_count(field(info, ipath, "agents-number"), ipath + ".agents-number");
  task.info.atoms_number = get_count(field(info, ipath, "atoms-number"), ipath + ".atoms-number");
  task.info.facts_number = get_count(field(info, ipath, "facts-number"), ipath + ".facts-number");
  task.info.actions_number =
      get_count(field(info, ipath, "actions-number"), ipath + ".actions-number");
  task.info.initial_worlds_number = get_count(field(info, ipath, "initial-worlds-number"),
                                              ipath + ".initial-worlds-number");
  task.info.goal_modal_depth =
      get_count(field(info, ipath, "goal-modal-depth"), ipath + ".goal-modal-depth");
  task.info.goal_size = get_count(field(info, ipath, "goal-size"), ipath + ".goal-size");

  const Json& language = field(doc, root, "language");
  task.atoms = get_string_array(field(language, root + ".language", "atoms"),
                                root + ".language.atoms");
  task.agents = get_string_array(field(language, root + ".language", "agents"),
                                 root + ".language.agents");

  auto facts = get_string_array(field(doc, root, "facts"), root + ".facts");
  task.facts.atoms = std::set<Atom>(facts.begin(), facts.end());

  task.initial =
      json_to_state(field(doc, root, "initial-state"), root + ".initial-state", task.agents);

  const Json& actions = field(doc, root, "actions");
  if (!actions.is_object()) bad(root + ".actions", "expected an object");
  for (const auto& [name, value] : actions.items())
    task.actions.push_back({name, json_to_action(value, root + ".actions." + name, name)});

  task.goal = json_to_formula(field(doc, root, "goal"), root + ".goal");
  return task;
}

}  // namespace epddl
