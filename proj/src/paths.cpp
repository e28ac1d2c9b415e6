#include "pdag/paths.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "pdag/detail/tolerance.hpp"
#include "pdag/errors.hpp"

namespace pdag {

namespace detail {

PathContext context_from_positions(const DagIndex& dag, std::span<const int> positions) {
  PathContext ctx;
  ctx.nodes.reserve(positions.size());
  ctx.selection.assign(dag.structure_count(), -1);
  for (int v : positions) {
    ctx.nodes.push_back(dag.id(v));
    ctx.length += dag.wcet(v);
    if (dag.conditional(v)) ctx.selection[dag.owner_structure(v)] = dag.owner_branch(v);
  }
  for (std::size_t s = 0; s < ctx.selection.size(); ++s) {
    if (ctx.selection[s] < 0) continue;
    const auto& info = dag.structure(s);
    ctx.branches.push_back({info.id, info.branches[ctx.selection[s]].index});
    ctx.structures.push_back(info.id);
  }
  return ctx;
}

double active_longest(const DagIndex& dag, std::span<const int> order, const std::vector<char>& active,
                      std::vector<double>& best) {
  double longest = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    double tail = 0.0;
    for (int w : dag.successors(v))
      if (active[w]) tail = std::max(tail, best[w]);
    best[v] = dag.wcet(v) + tail;
    longest = std::max(longest, best[v]);
  }
  return longest;
}

std::vector<int> active_longest_path(const DagIndex& dag, std::span<const int> order,
                                     const std::vector<char>& active) {
  std::vector<double> best(dag.node_count(), 0.0);
  double longest = active_longest(dag, order, active, best);

  auto has_active_pred = [&](int v) {
    for (int u : dag.predecessors(v))
      if (active[u]) return true;
    return false;
  };
  // Positions ascend with ids, so the smallest position is the smallest id.
  int current = -1;
  for (int v : order)
    if (!has_active_pred(v) && time_eq(best[v], longest) && (current < 0 || v < current)) current = v;

  std::vector<int> path;
  while (current >= 0) {
    path.push_back(current);
    int next = -1;
    double tail = 0.0;
    for (int w : dag.successors(current))
      if (active[w]) tail = std::max(tail, best[w]);
    for (int w : dag.successors(current)) {
      if (active[w] && time_eq(best[w], tail)) {
        next = w;  // successors are sorted, first match is the smallest id
        break;
      }
    }
    current = next;
  }
  return path;
}

}  // namespace detail

ScenarioGraph instantiate(const DagIndex& dag, const Scenario& scenario) {
  std::vector<int> chosen(dag.structure_count(), -1);
  for (const auto& [sid, index] : scenario.choice) {
    int s;
    try {
      s = dag.structure_position(sid);
    } catch (const std::out_of_range&) {
      throw ModelError("scenario names unknown structure " + std::to_string(sid));
    }
    chosen[s] = dag.branch_position(s, index);
    if (chosen[s] < 0)
      throw ModelError("structure " + std::to_string(sid) + " has no branch " + std::to_string(index));
  }
  for (std::size_t s = 0; s < chosen.size(); ++s)
    if (chosen[s] < 0) throw ModelError("scenario has no choice for structure " + std::to_string(dag.structure(s).id));

  ScenarioGraph g;
  g.scenario = scenario;
  std::vector<char> active(dag.node_count(), 0);
  for (std::size_t v = 0; v < dag.node_count(); ++v) {
    int s = dag.owner_structure(static_cast<int>(v));
    active[v] = s < 0 || chosen[s] == dag.owner_branch(static_cast<int>(v));
    if (active[v]) g.nodes.push_back({dag.id(static_cast<int>(v)), dag.wcet(static_cast<int>(v))});
  }
  for (std::size_t v = 0; v < dag.node_count(); ++v) {
    if (!active[v]) continue;
    for (int w : dag.successors(static_cast<int>(v)))
      if (active[w]) g.edges.push_back({dag.id(static_cast<int>(v)), dag.id(w)});
  }
  return g;
}

PathContext longest_path(const DagIndex& dag, const ScenarioGraph& graph) {
  std::vector<char> active(dag.node_count(), 0);
  for (const Node& n : graph.nodes) active[dag.position(n.id)] = 1;
  std::vector<int> order;
  for (int v : dag.topological_order())
    if (active[v]) order.push_back(v);
  return detail::context_from_positions(dag, detail::active_longest_path(dag, order, active));
}

double volume(const ScenarioGraph& graph) {
  double total = 0.0;
  for (const Node& n : graph.nodes) total += n.wcet;
  return total;
}

double branch_length(const DagIndex& dag, StructureId structure, BranchIndex branch) {
  int s = dag.structure_position(structure);
  int k = dag.branch_position(s, branch);
  if (k < 0) throw std::out_of_range("unknown branch index " + std::to_string(branch));
  return dag.structure(s).branches[k].length;
}

PathContext path_context(const DagIndex& dag, std::span<const NodeId> sequence) {
  if (sequence.empty()) throw ModelError("empty path");
  std::vector<int> positions;
  positions.reserve(sequence.size());
  for (NodeId id : sequence) {
    if (!dag.contains(id)) throw ModelError("path references unknown node " + std::to_string(id));
    positions.push_back(dag.position(id));
  }
  if (positions.front() != dag.source()) throw ModelError("path does not start at the source");
  if (positions.back() != dag.sink()) throw ModelError("path does not end at the sink");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (!dag.has_edge(positions[i - 1], positions[i]))
      throw ModelError("no edge " + std::to_string(sequence[i - 1]) + " -> " + std::to_string(sequence[i]));
  return detail::context_from_positions(dag, positions);
}

namespace {

// Longest suffix from each node to the sink over the full graph. A
// source-to-sink walk enters at most one branch per structure, so this is
// the same as replacing each structure with its longest branch.
std::vector<double> suffix_potential(const DagIndex& dag) {
  std::vector<double> potential(dag.node_count(), 0.0);
  auto topo = dag.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    double tail = 0.0;
    for (int w : dag.successors(*it)) tail = std::max(tail, potential[w]);
    potential[*it] = dag.wcet(*it) + tail;
  }
  return potential;
}

}  // namespace

std::vector<PathContext> candidate_paths(const DagIndex& dag, double threshold) {
  const std::vector<double> potential = suffix_potential(dag);

  std::vector<PathContext> out;
  if (!detail::time_ge(potential[dag.source()], threshold)) return out;

  struct Frame {
    int node;
    std::size_t next;
    double prefix;  // length including node
  };
  std::vector<Frame> stack{{dag.source(), 0, dag.wcet(dag.source())}};
  std::vector<int> path{dag.source()};
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.node == dag.sink()) {
      PathContext ctx = detail::context_from_positions(dag, path);
      if (detail::time_ge(ctx.length, threshold)) out.push_back(std::move(ctx));
      stack.pop_back();
      path.pop_back();
      continue;
    }
    auto succ = dag.successors(top.node);
    if (top.next == succ.size()) {
      stack.pop_back();
      path.pop_back();
      continue;
    }
    int w = succ[top.next++];
    if (!detail::time_ge(top.prefix + potential[w], threshold)) continue;
    double prefix = top.prefix + dag.wcet(w);
    stack.push_back({w, 0, prefix});
    path.push_back(w);
  }
  return out;
}

std::vector<PathContext> candidate_heads(const DagIndex& dag, double threshold) {
  const std::vector<double> potential = suffix_potential(dag);
  std::vector<PathContext> out;
  if (!detail::time_ge(potential[dag.source()], threshold)) return out;

  // Label setting over (node, branch choices so far). Two prefixes reaching
  // the same node with the same choices have the same set of completions, so
  // only the longest (then lexicographically smallest) one is kept.
  struct Label {
    int node;
    int pred;
    double length;
  };
  std::vector<Label> labels;
  std::vector<std::unordered_map<std::string, int>> at(dag.node_count());

  auto sequence = [&](int label) {
    std::vector<int> seq;
    for (; label >= 0; label = labels[label].pred) seq.push_back(labels[label].node);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };
  auto offer = [&](int node, std::string key, int pred, double length) {
    auto [it, inserted] = at[node].try_emplace(std::move(key), static_cast<int>(labels.size()));
    if (inserted) {
      labels.push_back({node, pred, length});
      return;
    }
    Label& current = labels[it->second];
    if (length > current.length) {
      current = {node, pred, length};
    } else if (length == current.length) {
      std::vector<int> mine = sequence(pred);
      std::vector<int> theirs = sequence(current.pred);
      if (mine < theirs) current.pred = pred;
    }
  };

  const int source = dag.source();
  std::string empty(dag.structure_count(), '\0');
  offer(source, empty, -1, dag.wcet(source));
  for (int v : dag.topological_order()) {
    if (v == dag.sink()) break;
    for (const auto& [key, id] : at[v]) {
      const double length = labels[id].length;
      for (int w : dag.successors(v)) {
        if (!detail::time_ge(length + potential[w], threshold)) continue;
        std::string next = key;
        if (dag.conditional(w)) next[dag.owner_structure(w)] = static_cast<char>(dag.owner_branch(w) + 1);
        offer(w, std::move(next), id, length + dag.wcet(w));
      }
    }
    std::unordered_map<std::string, int>().swap(at[v]);
  }

  for (const auto& [key, id] : at[dag.sink()]) {
    if (!detail::time_ge(labels[id].length, threshold)) continue;
    std::vector<int> seq = sequence(id);
    out.push_back(detail::context_from_positions(dag, seq));
  }
  std::sort(out.begin(), out.end(), [](const PathContext& a, const PathContext& b) { return a.nodes < b.nodes; });
  return out;
}

}  // namespace pdag
