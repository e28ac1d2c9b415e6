#pragma once

#include <span>
#include <vector>

#include "pdag/dag_index.hpp"
#include "pdag/paths.hpp"

namespace pdag {

/// Part of a p-DAG spanned by an anchor path plus every node of the
/// structures that path enters but a competing path does not.
struct SubStructure {
  std::vector<NodeId> nodes;             // ascending
  std::vector<Edge> edges;               // induced
  std::vector<StructureId> structures;   // structures treated as probabilistic
};

/// Lower bound on the longest path over all scenarios: the longest path of
/// the graph that keeps, in every structure, the branch with the smallest
/// branch length (lowest index on ties).
double delta(const DagIndex& dag);

/// The same bound restricted to a sub-structure. Nodes of the sub-structure
/// that belong to branches of structures outside `sub.structures` count as
/// unconditional. Local sources and sinks are joined by virtual endpoints.
double delta(const DagIndex& dag, const SubStructure& sub);

/// Structures in S(anchor) \ S(other), the anchor's nodes and every node of
/// those structures, with the induced edges.
SubStructure build_substructure(const DagIndex& dag, const PathContext& anchor, const PathContext& other);

namespace detail {

/// Repeated sub-structure bounds without per-call allocation.
class SubstructureDelta {
 public:
  explicit SubstructureDelta(const DagIndex& dag);

  /// Bound for the sub-structure spanned by `anchor` and the structures at
  /// `structures` (DagIndex positions).
  double operator()(const PathContext& anchor, std::span<const int> structures);

 private:
  double evaluate();

  const DagIndex& dag_;
  std::vector<char> active_;
  std::vector<double> best_;
  std::vector<int> members_;
  std::vector<char> dropped_structure_;
};

}  // namespace detail

}  // namespace pdag
