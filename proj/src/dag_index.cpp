#include "pdag/dag_index.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

#include "pdag/errors.hpp"

namespace pdag {

DagIndex::DagIndex(const PDag& input) {
  ValidationReport report = validate(input);
  if (!report.ok) {
    std::string msg = "invalid p-DAG: ";
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
      const Violation& v = report.violations[i];
      msg += (i ? "; " : "") + std::string(rule_name(v.rule)) + " (" + v.message + ")";
    }
    throw ModelError(msg);
  }
  pdag_ = canonical(input);

  const std::size_t n = pdag_.nodes.size();
  ids_.reserve(n);
  wcet_.reserve(n);
  for (const Node& node : pdag_.nodes) {
    ids_.push_back(node.id);
    wcet_.push_back(node.wcet);
  }
  succ_.assign(n, {});
  pred_.assign(n, {});
  for (const Edge& e : pdag_.edges) {
    int a = position(e.from), b = position(e.to);
    succ_[a].push_back(b);
    pred_[b].push_back(a);
  }
  for (auto& list : succ_) std::sort(list.begin(), list.end());
  for (auto& list : pred_) std::sort(list.begin(), list.end());

  // Kahn's algorithm, smallest id first.
  std::vector<int> indegree(n);
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    indegree[v] = static_cast<int>(pred_[v].size());
    if (indegree[v] == 0) ready.push(static_cast<int>(v));
    if (succ_[v].empty()) sink_ = static_cast<int>(v);
  }
  source_ = ready.top();
  rank_.assign(n, 0);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    rank_[v] = static_cast<int>(topo_.size());
    topo_.push_back(v);
    for (int w : succ_[v])
      if (--indegree[w] == 0) ready.push(w);
  }

  owner_structure_.assign(n, -1);
  owner_branch_.assign(n, -1);
  structures_.reserve(pdag_.structures.size());
  for (const ProbStructure& s : pdag_.structures) {
    StructureInfo info;
    info.id = s.id;
    info.entry = position(s.entry);
    info.exit = position(s.exit);
    double sum = 0.0;
    for (const Branch& b : s.branches) sum += b.prob;
    for (const Branch& b : s.branches) {
      BranchInfo bi;
      bi.index = b.index;
      bi.prob = b.prob / sum;
      for (NodeId id : b.nodes) bi.nodes.push_back(position(id));
      std::sort(bi.nodes.begin(), bi.nodes.end());
      for (int v : bi.nodes) bi.volume += wcet_[v];
      info.branches.push_back(std::move(bi));
    }
    structures_.push_back(std::move(info));
  }
  for (std::size_t s = 0; s < structures_.size(); ++s)
    for (std::size_t k = 0; k < structures_[s].branches.size(); ++k)
      for (int v : structures_[s].branches[k].nodes) {
        owner_structure_[v] = static_cast<int>(s);
        owner_branch_[v] = static_cast<int>(k);
      }

  // Branch lengths: longest internal path that starts at a successor of the
  // entry and ends at a predecessor of the exit.
  std::vector<double> best(n, 0.0);
  for (std::size_t s = 0; s < structures_.size(); ++s) {
    StructureInfo& info = structures_[s];
    for (std::size_t k = 0; k < info.branches.size(); ++k) {
      BranchInfo& b = info.branches[k];
      std::vector<int> order = b.nodes;
      std::sort(order.begin(), order.end(), [&](int x, int y) { return rank_[x] > rank_[y]; });
      for (int v : order) {
        double tail = -1.0;
        for (int w : succ_[v]) {
          if (w == info.exit) tail = std::max(tail, 0.0);
          else if (owner_structure_[w] == static_cast<int>(s) && owner_branch_[w] == static_cast<int>(k))
            tail = std::max(tail, best[w]);
        }
        best[v] = wcet_[v] + std::max(tail, 0.0);
      }
      for (int v : b.nodes)
        if (has_edge(info.entry, v)) b.length = std::max(b.length, best[v]);
    }
    for (std::size_t k = 0; k < info.branches.size(); ++k) {
      info.max_volume = std::max(info.max_volume, info.branches[k].volume);
      if (info.branches[k].length < info.branches[info.shortest_branch].length)
        info.shortest_branch = static_cast<int>(k);
    }
  }

  for (std::size_t v = 0; v < n; ++v)
    if (owner_structure_[v] < 0) unconditional_volume_ += wcet_[v];
}

int DagIndex::position(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) throw std::out_of_range("unknown node id " + std::to_string(id));
  return static_cast<int>(it - ids_.begin());
}

bool DagIndex::contains(NodeId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

bool DagIndex::has_edge(int from, int to) const {
  return std::binary_search(succ_[from].begin(), succ_[from].end(), to);
}

int DagIndex::structure_position(StructureId id) const {
  for (std::size_t s = 0; s < structures_.size(); ++s)
    if (structures_[s].id == id) return static_cast<int>(s);
  throw std::out_of_range("unknown structure id " + std::to_string(id));
}

int DagIndex::branch_position(std::size_t s, BranchIndex index) const {
  const auto& branches = structures_[s].branches;
  for (std::size_t k = 0; k < branches.size(); ++k)
    if (branches[k].index == index) return static_cast<int>(k);
  return -1;
}

}  // namespace pdag
