#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "epddl/bisim.hpp"
#include "epddl/errors.hpp"
#include "epddl/ground.hpp"
#include "epddl/json_io.hpp"
#include "epddl/parser.hpp"
#include "epddl/runtime.hpp"
#include "epddl/typecheck.hpp"

namespace {

using namespace epddl;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EpddlError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

ast::Spec load_spec(const std::string& problem_path, const std::string& domain_path,
                    const std::vector<std::string>& library_paths) {
  ast::Spec spec;
  ast::Fragment problem = parse_text(slurp(problem_path), problem_path);
  if (problem.kind != ast::Fragment::Kind::Problem)
    throw EpddlError(problem_path + ": expected a problem definition");
  spec.problem = *problem.problem;

  ast::Fragment domain = parse_text(slurp(domain_path), domain_path);
  if (domain.kind != ast::Fragment::Kind::Domain)
    throw EpddlError(domain_path + ": expected a domain definition");
  spec.domain = *domain.domain;

  for (const auto& path : library_paths) {
    ast::Fragment library = parse_text(slurp(path), path);
    if (library.kind != ast::Fragment::Kind::Library)
      throw EpddlError(path + ": expected an action type library definition");
    spec.libraries.push_back(*library.library);
  }
  return spec;
}

GroundTask task_from_sources(const std::vector<std::string>& sources) {
  if (sources.size() < 2)
    throw EpddlError("need a problem file and a domain file (plus optional libraries)");
  ast::Spec spec = load_spec(sources[0], sources[1],
                             {sources.begin() + 2, sources.end()});
  return build_task(type_check(spec));
}

GroundTask load_task(const std::vector<std::string>& sources) {
  if (sources.size() == 1 && sources[0].size() > 5 &&
      sources[0].substr(sources[0].size() - 5) == ".json")
    return read_json(slurp(sources[0]));
  return task_from_sources(sources);
}

Plan read_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EpddlError("cannot open '" + path + "'");
  Plan plan;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    plan.steps.push_back(line.substr(begin, end - begin + 1));
  }
  return plan;
}

int run_check(const std::vector<std::string>& sources) {
  if (sources.size() < 2)
    throw EpddlError("usage: epddl check <problem> <domain> [libraries...]");
  ast::Spec spec = load_spec(sources[0], sources[1], {sources.begin() + 2, sources.end()});
  type_check(spec);
  std::cout << "ok\n";
  return 0;
}

int run_ground(const std::vector<std::string>& sources, const std::string& output) {
  GroundTask task = task_from_sources(sources);
  std::string text = emit_json(task);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw EpddlError("cannot write '" + output + "'");
    out << text;
  }
  return 0;
}

int run_solve(const std::vector<std::string>& sources, int depth, std::size_t max_states) {
  GroundTask task = load_task(sources);
  SolveOptions options;
  options.max_depth = depth;
  options.max_states = max_states;
  SolveResult result = solve_bfs(task, options);
  switch (result.outcome) {
    case SolveResult::Outcome::Found:
      for (const auto& step : result.plan.steps) std::cout << step << "\n";
      return 0;
    case SolveResult::Outcome::NoneFound:
      std::cerr << "no plan up to depth " << depth << " (" << result.visited
                << " states visited)\n";
      return 1;
    case SolveResult::Outcome::BudgetExceeded:
      std::cerr << "state budget of " << max_states << " exceeded\n";
      return 2;
  }
  return 3;
}

int run_validate(const std::string& task_path, const std::string& plan_path) {
  GroundTask task = load_task({task_path});
  Plan plan = read_plan(plan_path);
  Verdict verdict = validate_plan(task, plan);
  switch (verdict.status) {
    case Verdict::Status::Valid:
      std::cout << "valid\n";
      return 0;
    case Verdict::Status::InapplicableAt:
      std::cout << "inapplicable-at " << verdict.step << "\n";
      return 1;
    case Verdict::Status::GoalUnsatisfied:
      std::cout << "goal-unsatisfied\n";
      return 1;
  }
  return 3;
}

int run_analyze(const std::string& task_path) {
  GroundTask task = load_task({task_path});
  FrameReport frames = frame_report(task.initial);
  for (const auto& [agent, flags] : frames.per_agent)
    std::cout << agent << ": reflexive=" << (flags.reflexive ? "yes" : "no")
              << " serial=" << (flags.serial ? "yes" : "no")
              << " transitive=" << (flags.transitive ? "yes" : "no")
              << " euclidean=" << (flags.euclidean ? "yes" : "no") << "\n";
  std::cout << "classification: " << frame_class_name(frames.classification) << "\n";
  PointingReport pointing = analyze_pointing(task.initial);
  std::cout << "global: " << (pointing.global ? "yes" : "no") << "\n";
  std::cout << "local-for:";
  for (const auto& agent : pointing.local_for) std::cout << " " << agent;
  std::cout << "\n";
  std::cout << "non-deterministic: " << (pointing.nondeterministic ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EPDDL compiler and desk-scale epistemic planner"};
  app.require_subcommand(1);

  std::vector<std::string> sources;
  std::string output;
  std::string task_path, plan_path;
  int depth = 6;
  std::size_t max_states = 50000;

  CLI::App* check = app.add_subcommand("check", "parse and type-check a specification");
  check->add_option("sources", sources, "problem, domain, libraries...")->required();

  CLI::App* ground = app.add_subcommand("ground", "ground a specification to task JSON");
  ground->add_option("sources", sources, "problem, domain, libraries...")->required();
  ground->add_option("-o,--output", output, "output file (default: stdout)");

  CLI::App* solve = app.add_subcommand("solve", "breadth-first search for a plan");
  solve->add_option("sources", sources, "task.json, or problem domain libraries...")->required();
  solve->add_option("--depth", depth, "maximum plan length");
  solve->add_option("--max-states", max_states, "visited-state budget");

  CLI::App* validate = app.add_subcommand("validate", "validate a plan file against a task");
  validate->add_option("task", task_path, "task.json")->required();
  validate->add_option("plan", plan_path, "plan file, one action per line")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "frame and pointing analysis of the initial state");
  analyze->add_option("task", task_path, "task.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(sources);
    if (ground->parsed()) return run_ground(sources, output);
    if (solve->parsed()) return run_solve(sources, depth, max_states);
    if (validate->parsed()) return run_validate(task_path, plan_path);
    if (analyze->parsed()) return run_analyze(task_path);
  } catch (const StateOverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TypeCheckError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const LexError& e) {
    std::cerr << e.what() << "\n";  // carries file:line:col already
    return 1;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const EpddlError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
