#pragma once

#include <map>
#include <span>
#include <vector>

#include "pdag/dag_index.hpp"
#include "pdag/model.hpp"

namespace pdag {

/// One branch choice per probabilistic structure.
struct Scenario {
  std::map<StructureId, BranchIndex> choice;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The non-conditional graph a job executes under a scenario.
struct ScenarioGraph {
  Scenario scenario;
  std::vector<Node> nodes;  // ascending id
  std::vector<Edge> edges;  // induced, sorted
};

/// A source-to-sink path together with the branches it traverses.
struct PathContext {
  std::vector<NodeId> nodes;
  double length = 0.0;
  std::vector<BranchRef> branches;       // H: sorted by structure id
  std::vector<StructureId> structures;   // S: sorted
  /// Branch position taken in each structure (by structure position in the
  /// DagIndex), or -1 for structures the path does not enter.
  std::vector<int> selection;
};

/// Throws ModelError when the scenario misses a structure or names a branch
/// that does not exist.
ScenarioGraph instantiate(const DagIndex& dag, const Scenario& scenario);

/// Maximum-length source-to-sink path. Among equally long paths the
/// lexicographically smallest node-id sequence wins.
PathContext longest_path(const DagIndex& dag, const ScenarioGraph& graph);

/// Sum of WCETs over the executed nodes.
double volume(const ScenarioGraph& graph);

/// Longest internal path through a branch sub-graph.
double branch_length(const DagIndex& dag, StructureId structure, BranchIndex branch);

/// Builds the context of an explicit node sequence. Throws ModelError when
/// consecutive nodes are not connected or the sequence does not run from
/// source to sink.
PathContext path_context(const DagIndex& dag, std::span<const NodeId> sequence);

/// Every source-to-sink path of length >= threshold, in lexicographic order
/// of node ids. Prefixes are abandoned as soon as prefix length plus the
/// longest possible suffix falls below the threshold.
std::vector<PathContext> candidate_paths(const DagIndex& dag, double threshold);

/// For every branch set H reached by some candidate path (length >=
/// threshold), the longest path with exactly that branch set; ties go to the
/// lexicographically smallest node sequence. Results are in lexicographic
/// order. Unlike candidate_paths this never lists more than one path per
/// branch set, so it stays polynomial in the number of distinct branch sets.
std::vector<PathContext> candidate_heads(const DagIndex& dag, double threshold);

namespace detail {

/// Context from node positions. No connectivity checks.
PathContext context_from_positions(const DagIndex& dag, std::span<const int> positions);

/// Longest path over the nodes with `active[v] != 0`, with virtual zero-WCET
/// endpoints attached to every local source and sink. Nodes in `order` must
/// be exactly the active ones, sorted topologically. `best` is scratch space
/// of size dag.node_count().
double active_longest(const DagIndex& dag, std::span<const int> order, const std::vector<char>& active,
                      std::vector<double>& best);

/// Same as active_longest, also returning the lexicographically smallest
/// maximum path as positions.
std::vector<int> active_longest_path(const DagIndex& dag, std::span<const int> order,
                                     const std::vector<char>& active);

}  // namespace detail

}  // namespace pdag
