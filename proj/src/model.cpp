#include "pdag/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "pdag/errors.hpp"

namespace pdag {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kDuplicateNodeId: return "DuplicateNodeId";
    case Rule::kInvalidWcet: return "InvalidWcet";
    case Rule::kDanglingEdge: return "DanglingEdge";
    case Rule::kSelfLoop: return "SelfLoop";
    case Rule::kDuplicateEdge: return "DuplicateEdge";
    case Rule::kCycleDetected: return "CycleDetected";
    case Rule::kSourceCount: return "SourceCount";
    case Rule::kSinkCount: return "SinkCount";
    case Rule::kInvalidTiming: return "InvalidTiming";
    case Rule::kDuplicateStructureId: return "DuplicateStructureId";
    case Rule::kUnknownStructureNode: return "UnknownStructureNode";
    case Rule::kEntryExitConflict: return "EntryExitConflict";
    case Rule::kTooFewBranches: return "TooFewBranches";
    case Rule::kDuplicateBranchIndex: return "DuplicateBranchIndex";
    case Rule::kEmptyBranch: return "EmptyBranch";
    case Rule::kProbabilityRange: return "ProbabilityRange";
    case Rule::kProbabilitySum: return "ProbabilitySum";
    case Rule::kBranchOverlap: return "BranchOverlap";
    case Rule::kNestedStructure: return "NestedStructure";
    case Rule::kBranchEdge: return "BranchEdge";
    case Rule::kStructureBypass: return "StructureBypass";
    case Rule::kBranchConnectivity: return "BranchConnectivity";
  }
  return "Unknown";
}

bool ValidationReport::has(Rule rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [rule](const Violation& v) { return v.rule == rule; });
}

namespace {

class ReportBuilder {
 public:
  void add(Rule rule, std::string message, std::vector<std::int64_t> ids = {}) {
    report_.violations.push_back({rule, std::move(message), std::move(ids)});
  }
  ValidationReport finish() {
    report_.ok = report_.violations.empty();
    return std::move(report_);
  }

 private:
  ValidationReport report_;
};

struct Membership {
  std::size_t structure;  // position in pdag.structures
  std::size_t branch;     // position in structure.branches
};

}  // namespace

ValidationReport validate(const PDag& pdag) {
  ReportBuilder out;

  std::unordered_set<NodeId> ids;
  for (const Node& n : pdag.nodes) {
    if (!ids.insert(n.id).second) out.add(Rule::kDuplicateNodeId, "node id appears more than once", {n.id});
    if (!std::isfinite(n.wcet) || n.wcet < 0.0)
      out.add(Rule::kInvalidWcet, "wcet must be finite and non-negative", {n.id});
  }

  // Adjacency over well-formed, unique edges only.
  std::unordered_map<NodeId, std::vector<NodeId>> succ;
  std::unordered_map<NodeId, int> indegree;
  for (NodeId id : ids) {
    succ[id];
    indegree[id] = 0;
  }
  std::set<Edge> seen_edges;
  for (const Edge& e : pdag.edges) {
    if (!ids.count(e.from) || !ids.count(e.to)) {
      out.add(Rule::kDanglingEdge, "edge references an unknown node", {e.from, e.to});
      continue;
    }
    if (e.from == e.to) {
      out.add(Rule::kSelfLoop, "self-loop", {e.from});
      continue;
    }
    if (!seen_edges.insert(e).second) {
      out.add(Rule::kDuplicateEdge, "edge appears more than once", {e.from, e.to});
      continue;
    }
    succ[e.from].push_back(e.to);
    ++indegree[e.to];
  }

  std::vector<NodeId> sources, sinks;
  for (NodeId id : ids) {
    if (indegree[id] == 0) sources.push_back(id);
    if (succ[id].empty()) sinks.push_back(id);
  }
  std::sort(sources.begin(), sources.end());
  std::sort(sinks.begin(), sinks.end());

  {
    auto remaining = indegree;
    std::queue<NodeId> ready;
    for (NodeId s : sources) ready.push(s);
    std::size_t visited = 0;
    while (!ready.empty()) {
      NodeId v = ready.front();
      ready.pop();
      ++visited;
      for (NodeId w : succ[v])
        if (--remaining[w] == 0) ready.push(w);
    }
    if (visited != ids.size()) {
      std::vector<NodeId> cyclic;
      for (auto& [id, deg] : remaining)
        if (deg > 0) cyclic.push_back(id);
      std::sort(cyclic.begin(), cyclic.end());
      out.add(Rule::kCycleDetected, "edge relation contains a cycle", cyclic);
    }
  }
  if (sources.size() != 1)
    out.add(Rule::kSourceCount, "expected exactly one node without predecessors, found " +
                                    std::to_string(sources.size()), sources);
  if (sinks.size() != 1)
    out.add(Rule::kSinkCount, "expected exactly one node without successors, found " +
                                  std::to_string(sinks.size()), sinks);

  if (!(std::isfinite(pdag.period) && pdag.period > 0.0))
    out.add(Rule::kInvalidTiming, "period must be positive");
  if (!(std::isfinite(pdag.deadline) && pdag.deadline > 0.0))
    out.add(Rule::kInvalidTiming, "deadline must be positive");
  else if (pdag.deadline > pdag.period)
    out.add(Rule::kInvalidTiming, "deadline exceeds period");

  std::unordered_set<StructureId> structure_ids;
  std::unordered_map<NodeId, Membership> owner;
  std::unordered_set<NodeId> entries_exits;
  for (const ProbStructure& s : pdag.structures) {
    entries_exits.insert(s.entry);
    entries_exits.insert(s.exit);
  }

  for (std::size_t si = 0; si < pdag.structures.size(); ++si) {
    const ProbStructure& s = pdag.structures[si];
    if (!structure_ids.insert(s.id).second)
      out.add(Rule::kDuplicateStructureId, "structure id appears more than once", {s.id});
    if (!ids.count(s.entry)) out.add(Rule::kUnknownStructureNode, "entry is not a node", {s.id, s.entry});
    if (!ids.count(s.exit)) out.add(Rule::kUnknownStructureNode, "exit is not a node", {s.id, s.exit});
    if (s.entry == s.exit) out.add(Rule::kEntryExitConflict, "entry and exit coincide", {s.id, s.entry});
    if (s.branches.size() < 2)
      out.add(Rule::kTooFewBranches, "a structure needs at least two branches", {s.id});

    std::unordered_set<BranchIndex> indices;
    double sum = 0.0;
    for (std::size_t bi = 0; bi < s.branches.size(); ++bi) {
      const Branch& b = s.branches[bi];
      if (!indices.insert(b.index).second)
        out.add(Rule::kDuplicateBranchIndex, "branch index appears more than once", {s.id, b.index});
      if (b.nodes.empty()) out.add(Rule::kEmptyBranch, "branch has no nodes", {s.id, b.index});
      if (!std::isfinite(b.prob) || b.prob < 0.0 || b.prob > 1.0)
        out.add(Rule::kProbabilityRange, "branch probability outside [0, 1]", {s.id, b.index});
      sum += b.prob;
      for (NodeId n : b.nodes) {
        if (!ids.count(n)) {
          out.add(Rule::kUnknownStructureNode, "branch node is not a node", {s.id, b.index, n});
          continue;
        }
        if (entries_exits.count(n))
          out.add(Rule::kNestedStructure, "branch node is the entry or exit of a structure", {s.id, b.index, n});
        auto [it, fresh] = owner.emplace(n, Membership{si, bi});
        if (!fresh) out.add(Rule::kBranchOverlap, "node belongs to more than one branch", {n});
      }
    }
    if (!s.branches.empty() && std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "branch probabilities sum to " << sum;
      out.add(Rule::kProbabilitySum, msg.str(), {s.id});
    }
  }

  // Edges touching branch nodes stay inside the branch or attach it to its
  // own structure's entry/exit.
  for (const Edge& e : seen_edges) {
    auto from = owner.find(e.from);
    auto to = owner.find(e.to);
    if (from != owner.end()) {
      const ProbStructure& s = pdag.structures[from->second.structure];
      bool same = to != owner.end() && to->second.structure == from->second.structure &&
                  to->second.branch == from->second.branch;
      if (!same && e.to != s.exit)
        out.add(Rule::kBranchEdge, "edge leaves a branch other than through its exit", {e.from, e.to});
    }
    if (to != owner.end()) {
      const ProbStructure& s = pdag.structures[to->second.structure];
      bool same = from != owner.end() && from->second.structure == to->second.structure &&
                  from->second.branch == to->second.branch;
      if (!same && e.from != s.entry)
        out.add(Rule::kBranchEdge, "edge enters a branch other than through its entry", {e.from, e.to});
    }
  }
  for (const ProbStructure& s : pdag.structures)
    if (seen_edges.count(Edge{s.entry, s.exit}))
      out.add(Rule::kStructureBypass, "edge from entry to exit skips every branch", {s.id});

  // Every branch node lies on an entry -> branch -> exit route.
  std::unordered_map<NodeId, std::vector<NodeId>> pred;
  for (const Edge& e : seen_edges) pred[e.to].push_back(e.from);
  for (std::size_t si = 0; si < pdag.structures.size(); ++si) {
    const ProbStructure& s = pdag.structures[si];
    for (std::size_t bi = 0; bi < s.branches.size(); ++bi) {
      const Branch& b = s.branches[bi];
      auto in_branch = [&](NodeId n) {
        auto it = owner.find(n);
        return it != owner.end() && it->second.structure == si && it->second.branch == bi;
      };
      auto sweep = [&](NodeId start, auto& adjacency) {
        std::unordered_set<NodeId> reached;
        std::vector<NodeId> stack{start};
        while (!stack.empty()) {
          NodeId v = stack.back();
          stack.pop_back();
          for (NodeId w : adjacency[v])
            if (in_branch(w) && reached.insert(w).second) stack.push_back(w);
        }
        return reached;
      };
      auto forward = sweep(s.entry, succ);
      auto backward = sweep(s.exit, pred);
      for (NodeId n : b.nodes) {
        if (!ids.count(n) || !in_branch(n)) continue;
        if (!forward.count(n) || !backward.count(n))
          out.add(Rule::kBranchConnectivity, "branch node is not on an entry-to-exit route", {s.id, b.index, n});
      }
    }
  }

  return out.finish();
}

std::uint64_t scenario_count(const PDag& pdag) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (const ProbStructure& s : pdag.structures) {
    std::uint64_t k = s.branches.size();
    if (k == 0) return 0;
    if (count > kMax / k) return kMax;
    count *= k;
  }
  return count;
}

PDag canonical(PDag pdag) {
  std::sort(pdag.nodes.begin(), pdag.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  std::sort(pdag.edges.begin(), pdag.edges.end());
  for (ProbStructure& s : pdag.structures) {
    for (Branch& b : s.branches) std::sort(b.nodes.begin(), b.nodes.end());
    std::sort(s.branches.begin(), s.branches.end(),
              [](const Branch& a, const Branch& b) { return a.index < b.index; });
  }
  std::sort(pdag.structures.begin(), pdag.structures.end(),
            [](const ProbStructure& a, const ProbStructure& b) { return a.id < b.id; });
  return pdag;
}

// ---------------------------------------------------------------------------
// Canonical JSON format

namespace {

using json = nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class Reader {
 public:
  const json& object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(ParseError::Kind::kType, path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
      if (!known) fail(ParseError::Kind::kUnknownField, path + "." + it.key(), "unknown field");
    }
    return j;
  }

  const json& field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ParseError::Kind::kType, path + "." + key, "missing field");
    return *it;
  }

  const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(ParseError::Kind::kType, path, "expected an array");
    return j;
  }

  std::int64_t id(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) {
      auto v = j.get<std::uint64_t>();
      if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        fail(ParseError::Kind::kType, path, "id out of range");
      return static_cast<std::int64_t>(v);
    }
    if (j.is_number_integer()) {
      auto v = j.get<std::int64_t>();
      if (v < 0) fail(ParseError::Kind::kType, path, "ids are non-negative integers");
      return v;
    }
    fail(ParseError::Kind::kType, path, "expected a non-negative integer id");
  }

  double real(const json& j, const std::string& path) {
    if (!j.is_number()) fail(ParseError::Kind::kType, path, "expected a number");
    return j.get<double>();
  }

  [[noreturn]] static void fail(ParseError::Kind kind, const std::string& path, const std::string& msg) {
    throw ParseError(kind, path, msg);
  }
};

}  // namespace

PDag parse_pdag(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    auto colon = what.find(": ", what.find("parse error"));
    throw ParseError(ParseError::Kind::kSyntax, line_column(text, e.byte == 0 ? 0 : e.byte - 1),
                     colon == std::string::npos ? what : what.substr(colon + 2));
  }

  Reader r;
  PDag out;
  r.object(doc, "$", {"nodes", "edges", "structures", "period", "deadline"});

  const json& nodes = r.array(r.field(doc, "$", "nodes"), "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string path = "nodes[" + std::to_string(i) + "]";
    const json& n = r.object(nodes[i], path, {"id", "wcet"});
    out.nodes.push_back({r.id(r.field(n, path, "id"), path + ".id"), r.real(r.field(n, path, "wcet"), path + ".wcet")});
  }
  std::unordered_set<NodeId> known;
  for (const Node& n : out.nodes) known.insert(n.id);
  auto reference = [&](NodeId id, const std::string& path) {
    if (!known.count(id))
      throw ParseError(ParseError::Kind::kReference, path, "unknown node id " + std::to_string(id));
    return id;
  };

  const json& edges = r.array(r.field(doc, "$", "edges"), "edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string path = "edges[" + std::to_string(i) + "]";
    const json& e = r.array(edges[i], path);
    if (e.size() != 2) Reader::fail(ParseError::Kind::kType, path, "an edge is a [from, to] pair");
    NodeId from = reference(r.id(e[0], path + "[0]"), path + "[0]");
    NodeId to = reference(r.id(e[1], path + "[1]"), path + "[1]");
    out.edges.push_back({from, to});
  }

  if (doc.contains("structures")) {
    const json& structures = r.array(doc["structures"], "structures");
    for (std::size_t i = 0; i < structures.size(); ++i) {
      std::string path = "structures[" + std::to_string(i) + "]";
      const json& s = r.object(structures[i], path, {"id", "entry", "exit", "branches"});
      ProbStructure ps;
      ps.id = r.id(r.field(s, path, "id"), path + ".id");
      ps.entry = reference(r.id(r.field(s, path, "entry"), path + ".entry"), path + ".entry");
      ps.exit = reference(r.id(r.field(s, path, "exit"), path + ".exit"), path + ".exit");
      const json& branches = r.array(r.field(s, path, "branches"), path + ".branches");
      for (std::size_t k = 0; k < branches.size(); ++k) {
        std::string bpath = path + ".branches[" + std::to_string(k) + "]";
        const json& b = r.object(branches[k], bpath, {"index", "nodes", "prob"});
        Branch br;
        br.index = r.id(r.field(b, bpath, "index"), bpath + ".index");
        const json& bn = r.array(r.field(b, bpath, "nodes"), bpath + ".nodes");
        for (std::size_t j = 0; j < bn.size(); ++j) {
          std::string npath = bpath + ".nodes[" + std::to_string(j) + "]";
          br.nodes.push_back(reference(r.id(bn[j], npath), npath));
        }
        br.prob = r.real(r.field(b, bpath, "prob"), bpath + ".prob");
        ps.branches.push_back(std::move(br));
      }
      out.structures.push_back(std::move(ps));
    }
  }

  out.period = r.real(r.field(doc, "$", "period"), "period");
  out.deadline = r.real(r.field(doc, "$", "deadline"), "deadline");
  return out;
}

namespace {

std::string number(double x) { return json(x).dump(); }

}  // namespace

std::string serialize_pdag(const PDag& input) {
  const PDag pdag = canonical(input);
  std::string out = "{\n  \"nodes\": [";
  for (std::size_t i = 0; i < pdag.nodes.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += "{\"id\": " + std::to_string(pdag.nodes[i].id) + ", \"wcet\": " + number(pdag.nodes[i].wcet) + "}";
  }
  out += pdag.nodes.empty() ? "],\n" : "\n  ],\n";

  out += "  \"edges\": [";
  for (std::size_t i = 0; i < pdag.edges.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += "[" + std::to_string(pdag.edges[i].from) + ", " + std::to_string(pdag.edges[i].to) + "]";
  }
  out += pdag.edges.empty() ? "],\n" : "\n  ],\n";

  out += "  \"structures\": [";
  for (std::size_t i = 0; i < pdag.structures.size(); ++i) {
    const ProbStructure& s = pdag.structures[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"id\": " + std::to_string(s.id) + ", \"entry\": " + std::to_string(s.entry) +
           ", \"exit\": " + std::to_string(s.exit) + ", \"branches\": [";
    for (std::size_t k = 0; k < s.branches.size(); ++k) {
      const Branch& b = s.branches[k];
      out += k ? ",\n      " : "\n      ";
      out += "{\"index\": " + std::to_string(b.index) + ", \"nodes\": [";
      for (std::size_t j = 0; j < b.nodes.size(); ++j) {
        if (j) out += ", ";
        out += std::to_string(b.nodes[j]);
      }
      out += "], \"prob\": " + number(b.prob) + "}";
    }
    out += s.branches.empty() ? "]}" : "\n    ]}";
  }
  out += pdag.structures.empty() ? "],\n" : "\n  ],\n";

  out += "  \"period\": " + number(pdag.period) + ",\n";
  out += "  \"deadline\": " + number(pdag.deadline) + "\n}\n";
  return out;
}

std::string instance_hash(const PDag& pdag) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize_pdag(pdag)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pdag
