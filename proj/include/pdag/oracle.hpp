#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "pdag/dag_index.hpp"
#include "pdag/paths.hpp"
#include "pdag/response.hpp"

namespace pdag {

inline constexpr std::uint64_t kDefaultScenarioCap = 1'000'000;

/// Ground truth for one scenario.
struct ScenarioOutcome {
  Scenario scenario;
  double probability = 0.0;
  double longest = 0.0;
  /// Every maximum-length path, sorted. Empty unless ties were requested.
  std::vector<std::vector<NodeId>> tied_paths;
  double volume = 0.0;

  /// Graham's bound for this scenario on `cores` cores.
  double graham(int cores) const;
};

struct OracleOptions {
  std::uint64_t scenario_cap = kDefaultScenarioCap;
  bool record_ties = true;
};

/// One outcome per scenario, in lexicographic order of (structure id, branch
/// index) choices. Each scenario graph is materialized and analyzed on its
/// own. Throws ScenarioCapExceeded.
std::vector<ScenarioOutcome> enumerate_outcomes(const DagIndex& dag, const OracleOptions& options = {});

/// len + (vol - len) / cores for a materialized scenario graph.
double graham_bound(const ScenarioGraph& graph, int cores);

/// Mass of each scenario placed at its Graham bound.
RtDistribution outcome_distribution(const std::vector<ScenarioOutcome>& outcomes, int cores);

/// Throws ScenarioCapExceeded.
RtDistribution enum_distribution(const DagIndex& dag, int cores, std::uint64_t scenario_cap = kDefaultScenarioCap);

struct ExactLongestStats {
  /// Paths that are (co-)longest in at least one scenario.
  std::set<std::vector<NodeId>> members;
  /// Distribution of the realized longest-path length.
  RtDistribution lengths;

  /// Probability that the longest path is at least `length` long.
  double exceedance(double length) const;
};

/// Throws ScenarioCapExceeded.
ExactLongestStats exact_longest_stats(const DagIndex& dag, std::uint64_t scenario_cap = kDefaultScenarioCap);

}  // namespace pdag
