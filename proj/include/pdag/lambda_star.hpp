#pragma once

#include <cstddef>
#include <vector>

#include "pdag/dag_index.hpp"
#include "pdag/paths.hpp"

namespace pdag {

/// How two candidate paths can co-execute.
enum class PairClass {
  kS1,  ///< never in the same scenario: a shared structure is crossed via different branches
  kS2,  ///< always together or not at all: identical branch sets
  kS3,  ///< sometimes together: shared structures agree, branch sets differ
};

PairClass classify_pair(const PathContext& a, const PathContext& b);

struct LambdaStarEntry {
  PathContext path;
  double interference = 0.0;
};

/// Ordering of the longest-path set: length descending, then interference
/// ascending, then node sequence ascending.
bool precedes(const LambdaStarEntry& a, const LambdaStarEntry& b);

/// Paths that are the longest in at least one scenario, in `precedes` order.
struct LambdaStarSet {
  double delta = 0.0;
  std::size_t candidate_count = 0;          // branch sets among paths with len >= delta
  std::size_t removed_same_branches = 0;    // dropped for an identical branch set
  std::size_t removed_by_substructure = 0;  // dropped for a longer alternative completion
  std::vector<LambdaStarEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
};

/// Starts from the candidates with length >= delta(dag), keeps the leading
/// path of each branch set and walks those in `precedes` order. A candidate b
/// is dropped when an earlier surviving a
///  - has the same branch set and len(a) >= len(b), or
///  - agrees with b on every shared structure and the lower bound of the
///    sub-structure spanned by a and S(a) \ S(b) strictly exceeds len(b).
LambdaStarSet compute_lambda_star(const DagIndex& dag);

}  // namespace pdag
