#pragma once

// Shared fixtures and a brute-force reference that works on the raw PDag
// (no DagIndex, no library path code), so library results can be checked
// against something computed a different way.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdag/model.hpp"
#include "pdag/workbench.hpp"

namespace testing_support {

using pdag::NodeId;
using pdag::PDag;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(PDAG_FIXTURE_DIR) + "/" + name; }

inline PDag fixture(const std::string& name) { return pdag::parse_pdag(read_file(fixture_path(name))); }

// EX-A path names.
inline const std::vector<NodeId> kLambdaA{1, 2, 3, 5, 6};
inline const std::vector<NodeId> kLambdaB{1, 2, 4, 5, 6};
inline const std::vector<NodeId> kLambdaC{1, 7, 6};

// EX-B node ids.
namespace exb {
inline constexpr NodeId v1 = 1, g = 2, z1 = 3, z2 = 4, h = 5, i = 6, x1 = 7, x2 = 8, j = 9, k = 10, y1 = 11,
                        y2 = 12, l = 13, v99 = 99;
inline const std::vector<NodeId> t1x1{v1, g, z1, h, i, x1, j, v99};
inline const std::vector<NodeId> t1x2{v1, g, z1, h, i, x2, j, v99};
inline const std::vector<NodeId> t2x1{v1, g, z2, h, i, x1, j, v99};
inline const std::vector<NodeId> t2x2{v1, g, z2, h, i, x2, j, v99};
inline const std::vector<NodeId> t1y1{v1, g, z1, h, k, y1, l, v99};
inline const std::vector<NodeId> t1y2{v1, g, z1, h, k, y2, l, v99};
}  // namespace exb

// Chain of nodes 1..n with the given WCETs.
inline PDag chain(const std::vector<double>& wcets) {
  PDag p;
  for (std::size_t i = 0; i < wcets.size(); ++i) p.nodes.push_back({static_cast<NodeId>(i + 1), wcets[i]});
  for (std::size_t i = 1; i < wcets.size(); ++i)
    p.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
  p.period = p.deadline = 100;
  return p;
}

// Small random instances for exhaustive cross-checks: |Theta| in 1..4 and
// 2-3 branches, narrow layers so path counts stay modest.
inline pdag::GeneratorConfig small_config(std::uint64_t seed, int index) {
  pdag::GeneratorConfig c;
  c.seed = seed;
  c.structures = 1 + index % 4;
  c.branches = 2 + (index / 4) % 2;
  c.min_layers = 3;
  c.max_layers = 5;
  c.max_width = 4;
  c.max_branch_layers = 3;
  c.max_branch_width = 3;
  return c;
}

struct RefOutcome {
  std::map<std::int64_t, std::int64_t> choice;  // structure id -> branch index
  double probability = 1.0;
  double longest = 0.0;
  double volume = 0.0;
  std::set<std::vector<NodeId>> tied;  // every maximum-length path
};

// Every scenario of `p`, with the longest paths found by exhaustive path
// enumeration over the executed nodes. Probabilities are taken as given
// (not renormalized).
inline std::vector<RefOutcome> reference_outcomes(const PDag& p) {
  std::map<NodeId, double> wcet;
  for (const auto& n : p.nodes) wcet[n.id] = n.wcet;
  std::map<NodeId, std::vector<NodeId>> succ;
  std::map<NodeId, int> indeg;
  for (const auto& n : p.nodes) indeg[n.id] = 0;
  for (const auto& e : p.edges) {
    succ[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  NodeId source = 0;
  for (auto& [id, d] : indeg)
    if (d == 0) source = id;

  std::vector<RefOutcome> out;
  std::vector<std::size_t> pick(p.structures.size(), 0);
  while (true) {
    RefOutcome o;
    std::set<NodeId> excluded;
    for (std::size_t s = 0; s < p.structures.size(); ++s) {
      const auto& st = p.structures[s];
      o.choice[st.id] = st.branches[pick[s]].index;
      o.probability *= st.branches[pick[s]].prob;
      for (std::size_t b = 0; b < st.branches.size(); ++b)
        if (b != pick[s]) excluded.insert(st.branches[b].nodes.begin(), st.branches[b].nodes.end());
    }
    for (const auto& n : p.nodes)
      if (!excluded.count(n.id)) o.volume += n.wcet;

    std::vector<NodeId> path{source};
    std::function<void(NodeId, double)> walk = [&](NodeId v, double len) {
      bool leaf = true;
      for (NodeId w : succ[v]) {
        if (excluded.count(w)) continue;
        leaf = false;
        path.push_back(w);
        walk(w, len + wcet[w]);
        path.pop_back();
      }
      if (!leaf) return;
      if (len > o.longest + 1e-9) {
        o.longest = len;
        o.tied.clear();
      }
      if (std::abs(len - o.longest) <= 1e-9) o.tied.insert(path);
    };
    walk(source, wcet[source]);
    out.push_back(std::move(o));

    std::size_t s = p.structures.size();
    while (s > 0) {
      --s;
      if (++pick[s] < p.structures[s].branches.size()) break;
      pick[s] = 0;
      if (s == 0) return out;
    }
    if (p.structures.empty()) return out;
  }
}

// All source-to-sink paths, by plain recursion.
inline std::vector<std::vector<NodeId>> reference_paths(const PDag& p) {
  std::map<NodeId, std::vector<NodeId>> succ;
  std::map<NodeId, int> indeg;
  for (const auto& n : p.nodes) indeg[n.id] = 0;
  for (const auto& e : p.edges) {
    succ[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  NodeId source = 0;
  for (auto& [id, d] : indeg)
    if (d == 0) source = id;
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> path{source};
  std::function<void(NodeId)> walk = [&](NodeId v) {
    if (succ[v].empty()) out.push_back(path);
    for (NodeId w : succ[v]) {
      path.push_back(w);
      walk(w);
      path.pop_back();
    }
  };
  walk(source);
  return out;
}

inline double path_length(const PDag& p, const std::vector<NodeId>& path) {
  double len = 0.0;
  for (NodeId id : path)
    for (const auto& n : p.nodes)
      if (n.id == id) len += n.wcet;
  return len;
}

}  // namespace testing_support
