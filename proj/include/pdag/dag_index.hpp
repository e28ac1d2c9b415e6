#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdag/model.hpp"

namespace pdag {

/// Index-based, read-only view of a validated p-DAG. Every analysis works on
/// node positions rather than ids: positions follow ascending node id and
/// adjacency lists are sorted, which makes all traversals deterministic.
///
/// Branch probabilities are renormalized by their structure's sum here, so
/// downstream arithmetic sees an exact probability simplex.
class DagIndex {
 public:
  struct BranchInfo {
    BranchIndex index = 0;
    double prob = 0.0;
    std::vector<int> nodes;  // positions, ascending
    double volume = 0.0;
    double length = 0.0;  // longest internal entry-side to exit-side path
  };

  struct StructureInfo {
    StructureId id = 0;
    int entry = -1;
    int exit = -1;
    std::vector<BranchInfo> branches;  // ascending branch index
    double max_volume = 0.0;
    int shortest_branch = 0;  // argmin length; lowest index among ties
  };

  /// Throws ModelError naming the violated rules when `validate` fails.
  explicit DagIndex(const PDag& pdag);

  /// Canonicalized copy of the instance (probabilities as given).
  const PDag& pdag() const noexcept { return pdag_; }

  std::size_t node_count() const noexcept { return ids_.size(); }
  NodeId id(int v) const { return ids_[v]; }
  /// Throws std::out_of_range for unknown ids.
  int position(NodeId id) const;
  bool contains(NodeId id) const;
  double wcet(int v) const { return wcet_[v]; }

  std::span<const int> successors(int v) const { return succ_[v]; }
  std::span<const int> predecessors(int v) const { return pred_[v]; }
  bool has_edge(int from, int to) const;

  std::span<const int> topological_order() const noexcept { return topo_; }
  int topo_rank(int v) const { return rank_[v]; }

  int source() const noexcept { return source_; }
  int sink() const noexcept { return sink_; }

  std::size_t structure_count() const noexcept { return structures_.size(); }
  const StructureInfo& structure(std::size_t s) const { return structures_[s]; }
  /// Throws std::out_of_range for unknown ids.
  int structure_position(StructureId id) const;
  /// Position of `index` within structure `s`, or -1.
  int branch_position(std::size_t s, BranchIndex index) const;

  /// Structure / branch position owning a branch node; -1 for nodes that
  /// execute unconditionally.
  int owner_structure(int v) const { return owner_structure_[v]; }
  int owner_branch(int v) const { return owner_branch_[v]; }
  bool conditional(int v) const { return owner_structure_[v] >= 0; }

  /// Sum of WCETs over unconditional nodes.
  double unconditional_volume() const noexcept { return unconditional_volume_; }

 private:
  PDag pdag_;
  std::vector<NodeId> ids_;
  std::vector<double> wcet_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> pred_;
  std::vector<int> topo_;
  std::vector<int> rank_;
  int source_ = -1;
  int sink_ = -1;
  std::vector<StructureInfo> structures_;
  std::vector<int> owner_structure_;
  std::vector<int> owner_branch_;
  double unconditional_volume_ = 0.0;
};

}  // namespace pdag
