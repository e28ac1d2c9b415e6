#include "pdag/lowerbound.hpp"

#include <algorithm>

namespace pdag {

double delta(const DagIndex& dag) {
  std::vector<char> active(dag.node_count(), 0);
  for (std::size_t v = 0; v < dag.node_count(); ++v) {
    int s = dag.owner_structure(static_cast<int>(v));
    active[v] = s < 0 || dag.owner_branch(static_cast<int>(v)) == dag.structure(s).shortest_branch;
  }
  std::vector<int> order;
  for (int v : dag.topological_order())
    if (active[v]) order.push_back(v);
  std::vector<double> best(dag.node_count(), 0.0);
  return detail::active_longest(dag, order, active, best);
}

double delta(const DagIndex& dag, const SubStructure& sub) {
  std::vector<char> probabilistic(dag.structure_count(), 0);
  for (StructureId id : sub.structures) probabilistic[dag.structure_position(id)] = 1;

  std::vector<char> active(dag.node_count(), 0);
  for (NodeId id : sub.nodes) {
    int v = dag.position(id);
    int s = dag.owner_structure(v);
    active[v] = s < 0 || !probabilistic[s] || dag.owner_branch(v) == dag.structure(s).shortest_branch;
  }
  std::vector<int> order;
  for (int v : dag.topological_order())
    if (active[v]) order.push_back(v);
  std::vector<double> best(dag.node_count(), 0.0);
  return detail::active_longest(dag, order, active, best);
}

SubStructure build_substructure(const DagIndex& dag, const PathContext& anchor, const PathContext& other) {
  SubStructure sub;
  std::vector<char> member(dag.node_count(), 0);
  for (NodeId id : anchor.nodes) member[dag.position(id)] = 1;
  for (std::size_t s = 0; s < dag.structure_count(); ++s) {
    bool in_anchor = s < anchor.selection.size() && anchor.selection[s] >= 0;
    bool in_other = s < other.selection.size() && other.selection[s] >= 0;
    if (!in_anchor || in_other) continue;
    const auto& info = dag.structure(s);
    sub.structures.push_back(info.id);
    member[info.entry] = member[info.exit] = 1;
    for (const auto& b : info.branches)
      for (int v : b.nodes) member[v] = 1;
  }
  for (std::size_t v = 0; v < dag.node_count(); ++v) {
    if (!member[v]) continue;
    sub.nodes.push_back(dag.id(static_cast<int>(v)));
    for (int w : dag.successors(static_cast<int>(v)))
      if (member[w]) sub.edges.push_back({dag.id(static_cast<int>(v)), dag.id(w)});
  }
  return sub;
}

namespace detail {

SubstructureDelta::SubstructureDelta(const DagIndex& dag)
    : dag_(dag),
      active_(dag.node_count(), 0),
      best_(dag.node_count(), 0.0),
      dropped_structure_(dag.structure_count(), 0) {}

double SubstructureDelta::operator()(const PathContext& anchor, std::span<const int> structures) {
  members_.clear();
  for (int s : structures) dropped_structure_[s] = 1;
  // Anchor nodes, except branch nodes of the structures being minimized.
  for (NodeId id : anchor.nodes) {
    int v = dag_.position(id);
    int s = dag_.owner_structure(v);
    if (s >= 0 && dropped_structure_[s]) continue;
    if (!active_[v]) {
      active_[v] = 1;
      members_.push_back(v);
    }
  }
  for (int s : structures) {
    const auto& info = dag_.structure(s);
    for (int v : {info.entry, info.exit})
      if (!active_[v]) {
        active_[v] = 1;
        members_.push_back(v);
      }
    for (int v : info.branches[info.shortest_branch].nodes) {
      active_[v] = 1;
      members_.push_back(v);
    }
  }
  double result = evaluate();
  for (int v : members_) active_[v] = 0;
  for (int s : structures) dropped_structure_[s] = 0;
  return result;
}

double SubstructureDelta::evaluate() {
  std::sort(members_.begin(), members_.end(), [this](int a, int b) { return dag_.topo_rank(a) < dag_.topo_rank(b); });
  return active_longest(dag_, members_, active_, best_);
}

}  // namespace detail

}  // namespace pdag
