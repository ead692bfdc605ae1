#include "epddl/bisim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "epddl/errors.hpp"

namespace epddl {

namespace {

// Graph view with integer worlds for refinement.
struct Graph {
  int n = 0;
  std::vector<std::set<Atom>> label;
  // succ[agent_index][world] = successor world indices
  std::vector<std::vector<std::vector<int>>> succ;
};

Graph build_graph(const EpistemicState& s, const std::vector<AgentId>& agents,
                  std::map<WorldId, int>& index) {
  Graph g;
  g.n = static_cast<int>(s.worlds.size());
  for (int i = 0; i < g.n; ++i) index.emplace(s.worlds[i], i);
  g.label.resize(g.n);
  for (int i = 0; i < g.n; ++i) g.label[i] = s.labels.at(s.worlds[i]);
  g.succ.assign(agents.size(), std::vector<std::vector<int>>(g.n));
  for (std::size_t ai = 0; ai < agents.size(); ++ai) {
    auto it = s.relations.find(agents[ai]);
    if (it == s.relations.end()) continue;
    for (const auto& [a, b] : it->second)
      g.succ[ai][index.at(a)].push_back(index.at(b));
  }
  return g;
}

// Stable coloring = bisimulation classes. Initial colors from labels only.
std::vector<int> refine(const Graph& g) {
  std::vector<int> color(g.n);
  {
    std::map<std::set<Atom>, int> by_label;
    for (int w = 0; w < g.n; ++w) {
      auto [it, _] = by_label.try_emplace(g.label[w], static_cast<int>(by_label.size()));
      color[w] = it->second;
    }
  }
  for (;;) {
    // signature = (old color, per agent: set of successor colors)
    std::map<std::pair<int, std::vector<std::set<int>>>, int> sig_ids;
    std::vector<int> next(g.n);
    for (int w = 0; w < g.n; ++w) {
      std::vector<std::set<int>> per_agent(g.succ.size());
      for (std::size_t ai = 0; ai < g.succ.size(); ++ai)
        for (int v : g.succ[ai][w]) per_agent[ai].insert(color[v]);
      auto [it, _] = sig_ids.try_emplace({color[w], std::move(per_agent)},
                                         static_cast<int>(sig_ids.size()));
      next[w] = it->second;
    }
    // Each round only refines; a round with no split means stability.
    std::set<int> old_ids(color.begin(), color.end());
    if (sig_ids.size() == old_ids.size()) break;
    color = std::move(next);
  }
  return color;
}

std::vector<AgentId> union_agents(const EpistemicState& a, const EpistemicState& b) {
  std::vector<AgentId> agents = a.agents;
  for (const auto& i : b.agents)
    if (std::find(agents.begin(), agents.end(), i) == agents.end()) agents.push_back(i);
  return agents;
}

}  // namespace

bool bisimilar(const EpistemicState& a, const EpistemicState& b) {
  std::vector<AgentId> agents = union_agents(a, b);
  std::map<WorldId, int> index_a, index_b;
  Graph ga = build_graph(a, agents, index_a);
  Graph gb = build_graph(b, agents, index_b);

  // Joint graph: a's worlds first, then b's.
  Graph joint;
  joint.n = ga.n + gb.n;
  joint.label = ga.label;
  joint.label.insert(joint.label.end(), gb.label.begin(), gb.label.end());
  joint.succ.assign(agents.size(), std::vector<std::vector<int>>(joint.n));
  for (std::size_t ai = 0; ai < agents.size(); ++ai) {
    for (int w = 0; w < ga.n; ++w) joint.succ[ai][w] = ga.succ[ai][w];
    for (int w = 0; w < gb.n; ++w) {
      for (int v : gb.succ[ai][w]) joint.succ[ai][ga.n + w].push_back(ga.n + v);
    }
  }
  std::vector<int> color = refine(joint);

  std::set<int> a_designated, b_designated;
  for (const auto& w : a.designated) a_designated.insert(color[index_a.at(w)]);
  for (const auto& w : b.designated) b_designated.insert(color[ga.n + index_b.at(w)]);
  return std::includes(b_designated.begin(), b_designated.end(),
                       a_designated.begin(), a_designated.end()) &&
         std::includes(a_designated.begin(), a_designated.end(),
                       b_designated.begin(), b_designated.end());
}

EpistemicState contract(const EpistemicState& state) {
  // Restrict to worlds reachable from the designated set.
  std::map<WorldId, std::set<WorldId>> adj;
  for (const auto& [agent, rel] : state.relations) {
    (void)agent;
    for (const auto& [a, b] : rel) adj[a].insert(b);
  }
  std::set<WorldId> reachable(state.designated.begin(), state.designated.end());
  std::deque<WorldId> queue(state.designated.begin(), state.designated.end());
  while (!queue.empty()) {
    WorldId w = queue.front();
    queue.pop_front();
    for (const auto& v : adj[w])
      if (reachable.insert(v).second) queue.push_back(v);
  }

  EpistemicState sub;
  sub.agents = state.agents;
  for (const auto& w : state.worlds)
    if (reachable.count(w)) {
      sub.worlds.push_back(w);
      sub.labels[w] = state.labels.at(w);
    }
  for (const auto& [agent, rel] : state.relations)
    for (const auto& [a, b] : rel)
      if (reachable.count(a) && reachable.count(b)) sub.relations[agent].insert({a, b});
  sub.designated = state.designated;

  // Quotient by bisimulation classes; a class is designated iff it contains a
  // designated world.
  std::map<WorldId, int> index;
  Graph g = build_graph(sub, sub.agents, index);
  std::vector<int> color = refine(g);

  const std::vector<int>& class_of = color;

  EpistemicState out;
  out.agents = state.agents;
  std::map<int, std::string> names;
  for (int w = 0; w < g.n; ++w) {
    int c = class_of[w];
    if (!names.count(c)) {
      std::string id = "q" + std::to_string(names.size());
      names[c] = id;
      out.worlds.push_back(id);
      out.labels[id] = g.label[w];
    }
  }
  for (std::size_t ai = 0; ai < sub.agents.size(); ++ai)
    for (int w = 0; w < g.n; ++w)
      for (int v : g.succ[ai][w])
        out.relations[sub.agents[ai]].insert({names[class_of[w]], names[class_of[v]]});
  for (const auto& d : sub.designated) out.designated.insert(names[class_of[index.at(d)]]);
  return out;
}

std::string canonical_key(const EpistemicState& state) {
  EpistemicState c = contract(state);

  std::map<WorldId, int> index;
  Graph g = build_graph(c, c.agents, index);
  std::vector<int> color = refine(g);

  // BFS distance from the designated set over the union relation.
  std::vector<int> dist(g.n, 1 << 30);
  std::deque<int> queue;
  for (const auto& d : c.designated) {
    dist[index.at(d)] = 0;
    queue.push_back(index.at(d));
  }
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (std::size_t ai = 0; ai < g.succ.size(); ++ai)
      for (int v : g.succ[ai][w])
        if (dist[v] > dist[w] + 1) {
          dist[v] = dist[w] + 1;
          queue.push_back(v);
        }
  }

  // After contraction the refinement partition is discrete, so (distance,
  // designated flag, color) orders worlds canonically.
  std::vector<int> order(g.n);
  for (int w = 0; w < g.n; ++w) order[w] = w;
  std::vector<bool> is_designated(g.n, false);
  for (const auto& d : c.designated) is_designated[index.at(d)] = true;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (dist[x] != dist[y]) return dist[x] < dist[y];
    if (is_designated[x] != is_designated[y]) return static_cast<bool>(is_designated[x]);
    return color[x] < color[y];
  });
  std::vector<int> rank(g.n);
  for (int pos = 0; pos < g.n; ++pos) rank[order[pos]] = pos;

  std::string key;
  key += "n=" + std::to_string(g.n) + ";";
  for (int pos = 0; pos < g.n; ++pos) {
    int w = order[pos];
    key += "L" + std::to_string(pos) + "{";
    for (const auto& atom : g.label[w]) key += atom + ",";
    key += "}";
  }
  key += ";";
  // Relation sections ordered by agent name, not by the agents vector, so
  // states over one language always serialize alike.
  std::vector<std::size_t> agent_order(c.agents.size());
  for (std::size_t ai = 0; ai < c.agents.size(); ++ai) agent_order[ai] = ai;
  std::sort(agent_order.begin(), agent_order.end(),
            [&](std::size_t x, std::size_t y) { return c.agents[x] < c.agents[y]; });
  for (std::size_t ai : agent_order) {
    key += "R[" + c.agents[ai] + "]{";
    std::set<std::pair<int, int>> pairs;
    for (int w = 0; w < g.n; ++w)
      for (int v : g.succ[ai][w]) pairs.insert({rank[w], rank[v]});
    for (const auto& [a, b] : pairs)
      key += std::to_string(a) + ">" + std::to_string(b) + ",";
    key += "}";
  }
  key += ";D{";
  std::set<int> designated_ranks;
  for (const auto& d : c.designated) designated_ranks.insert(rank[index.at(d)]);
  for (int d : designated_ranks) key += std::to_string(d) + ",";
  key += "}";
  return key;
}

}  // namespace epddl
