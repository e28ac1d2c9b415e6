#include "pdag/oracle.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "pdag/detail/tolerance.hpp"
#include "pdag/errors.hpp"

namespace pdag {

namespace {

// Longest path, volume and optional tie set of a standalone scenario graph.
struct GraphSummary {
  double longest = 0.0;
  double volume = 0.0;
  std::vector<std::vector<NodeId>> tied;
};

GraphSummary summarize(const ScenarioGraph& g, bool with_ties) {
  const std::size_t n = g.nodes.size();
  auto local = [&](NodeId id) {
    auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), id,
                               [](const Node& node, NodeId key) { return node.id < key; });
    return static_cast<int>(it - g.nodes.begin());
  };
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indegree(n, 0);
  for (const Edge& e : g.edges) {
    int a = local(e.from), b = local(e.to);
    succ[a].push_back(b);
    ++indegree[b];
  }

  std::vector<int> order;
  order.reserve(n);
  std::vector<int> sources;
  std::queue<int> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) {
      ready.push(static_cast<int>(v));
      sources.push_back(static_cast<int>(v));
    }
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    order.push_back(v);
    for (int w : succ[v])
      if (--indegree[w] == 0) ready.push(w);
  }

  GraphSummary out;
  std::vector<double> best(n, 0.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    double tail = 0.0;
    for (int w : succ[*it]) tail = std::max(tail, best[w]);
    best[*it] = g.nodes[*it].wcet + tail;
  }
  for (const Node& node : g.nodes) out.volume += node.wcet;
  for (int s : sources) out.longest = std::max(out.longest, best[s]);

  if (with_ties) {
    std::vector<NodeId> path;
    auto walk = [&](auto&& self, int v) -> void {
      path.push_back(g.nodes[v].id);
      double tail = 0.0;
      for (int w : succ[v]) tail = std::max(tail, best[w]);
      bool leaf = true;
      for (int w : succ[v]) {
        if (!detail::time_eq(best[w], tail)) continue;
        leaf = false;
        self(self, w);
      }
      if (leaf) out.tied.push_back(path);
      path.pop_back();
    };
    for (int s : sources)
      if (detail::time_eq(best[s], out.longest)) walk(walk, s);
    std::sort(out.tied.begin(), out.tied.end());
  }
  return out;
}

void check_cap(const DagIndex& dag, std::uint64_t cap) {
  std::uint64_t count = scenario_count(dag.pdag());
  if (count > cap) throw ScenarioCapExceeded(count, cap);
}

}  // namespace

double ScenarioOutcome::graham(int cores) const {
  if (cores < 1) throw std::invalid_argument("core count must be at least 1");
  return longest + (volume - longest) / cores;
}

std::vector<ScenarioOutcome> enumerate_outcomes(const DagIndex& dag, const OracleOptions& options) {
  check_cap(dag, options.scenario_cap);
  const std::size_t structures = dag.structure_count();
  std::vector<std::size_t> digit(structures, 0);
  std::vector<ScenarioOutcome> out;

  while (true) {
    Scenario scenario;
    double probability = 1.0;
    for (std::size_t s = 0; s < structures; ++s) {
      const auto& branch = dag.structure(s).branches[digit[s]];
      scenario.choice.emplace(dag.structure(s).id, branch.index);
      probability *= branch.prob;
    }
    ScenarioGraph graph = instantiate(dag, scenario);
    GraphSummary summary = summarize(graph, options.record_ties);
    out.push_back({std::move(scenario), probability, summary.longest, std::move(summary.tied), summary.volume});

    // Odometer over branch positions; the last structure varies fastest.
    std::size_t s = structures;
    while (s > 0) {
      --s;
      if (++digit[s] < dag.structure(s).branches.size()) break;
      digit[s] = 0;
      if (s == 0) return out;
    }
    if (structures == 0) return out;
  }
}

double graham_bound(const ScenarioGraph& graph, int cores) {
  if (cores < 1) throw std::invalid_argument("core count must be at least 1");
  GraphSummary s = summarize(graph, false);
  return s.longest + (s.volume - s.longest) / cores;
}

RtDistribution outcome_distribution(const std::vector<ScenarioOutcome>& outcomes, int cores) {
  std::vector<DistributionPoint> points;
  points.reserve(outcomes.size());
  for (const ScenarioOutcome& o : outcomes) points.push_back({o.graham(cores), o.probability});
  return RtDistribution(std::move(points));
}

RtDistribution enum_distribution(const DagIndex& dag, int cores, std::uint64_t scenario_cap) {
  if (cores < 1) throw std::invalid_argument("core count must be at least 1");
  return outcome_distribution(enumerate_outcomes(dag, {scenario_cap, false}), cores);
}

double ExactLongestStats::exceedance(double length) const {
  double total = 0.0;
  for (const DistributionPoint& p : lengths.points())
    if (detail::time_ge(p.response, length)) total += p.mass;
  return total;
}

ExactLongestStats exact_longest_stats(const DagIndex& dag, std::uint64_t scenario_cap) {
  ExactLongestStats out;
  std::vector<DistributionPoint> lengths;
  for (ScenarioOutcome& o : enumerate_outcomes(dag, {scenario_cap, true})) {
    lengths.push_back({o.longest, o.probability});
    for (auto& p : o.tied_paths) out.members.insert(std::move(p));
  }
  out.lengths = RtDistribution(std::move(lengths));
  return out;
}

}  // namespace pdag
