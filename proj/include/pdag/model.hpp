#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pdag {

using NodeId = std::int64_t;
using StructureId = std::int64_t;
using BranchIndex = std::int64_t;

struct Node {
  NodeId id = 0;
  double wcet = 0.0;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// One alternative of a probabilistic structure. Exactly one branch of a
/// structure executes per job, with probability `prob`.
struct Branch {
  BranchIndex index = 0;
  std::vector<NodeId> nodes;
  double prob = 0.0;

  friend bool operator==(const Branch&, const Branch&) = default;
};

/// Entry node, exit node and the mutually exclusive branches between them.
/// Entry and exit are ordinary (unconditionally executed) nodes.
struct ProbStructure {
  StructureId id = 0;
  NodeId entry = 0;
  NodeId exit = 0;
  std::vector<Branch> branches;

  friend bool operator==(const ProbStructure&, const ProbStructure&) = default;
};

/// A periodic DAG task with probabilistic structures.
struct PDag {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<ProbStructure> structures;
  double period = 0.0;
  double deadline = 0.0;

  friend bool operator==(const PDag&, const PDag&) = default;
};

/// Identifies a branch by its structure id and branch index.
struct BranchRef {
  StructureId structure = 0;
  BranchIndex branch = 0;

  friend auto operator<=>(const BranchRef&, const BranchRef&) = default;
};

enum class Rule {
  kDuplicateNodeId,
  kInvalidWcet,
  kDanglingEdge,
  kSelfLoop,
  kDuplicateEdge,
  kCycleDetected,
  kSourceCount,
  kSinkCount,
  kInvalidTiming,
  kDuplicateStructureId,
  kUnknownStructureNode,
  kEntryExitConflict,
  kTooFewBranches,
  kDuplicateBranchIndex,
  kEmptyBranch,
  kProbabilityRange,
  kProbabilitySum,
  kBranchOverlap,
  kNestedStructure,
  kBranchEdge,
  kStructureBypass,
  kBranchConnectivity,
};

std::string_view rule_name(Rule rule);

struct Violation {
  Rule rule;
  std::string message;
  std::vector<std::int64_t> ids;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  bool has(Rule rule) const;
};

/// Absolute tolerance on the sum of a structure's branch probabilities.
inline constexpr double kProbabilitySumTolerance = 1e-9;

/// Checks every structural rule of the model. Never throws; each broken rule
/// becomes a violation entry.
ValidationReport validate(const PDag& pdag);

/// Product over structures of their branch counts, saturating at UINT64_MAX.
std::uint64_t scenario_count(const PDag& pdag);

/// Copy with nodes, edges, structures, branches and branch node lists sorted
/// by id. This is the order `serialize_pdag` writes.
PDag canonical(PDag pdag);

/// Reads the canonical JSON document. Checks syntax, field names, field types
/// and id references, but not semantic rules (call `validate`).
/// Throws ParseError.
PDag parse_pdag(std::string_view text);

/// Deterministic canonical JSON (sorted ids, shortest round-trip reals).
std::string serialize_pdag(const PDag& pdag);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string instance_hash(const PDag& pdag);

}  // namespace pdag
