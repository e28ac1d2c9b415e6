#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdag/dag_index.hpp"
#include "pdag/lambda_star.hpp"
#include "pdag/paths.hpp"

namespace pdag {

enum class ClampRule {
  kLower,       ///< negative value raised to 0
  kUpper,       ///< value cut so that the cumulative sum stays at 1
  kTerminated,  ///< probability mass exhausted by earlier paths; set to 0
};

struct ClampEvent {
  std::size_t index;
  ClampRule rule;
};

/// P(lambda_h): probability that the h-th path executes and is the longest.
struct ProbabilityAssignment {
  std::vector<double> probability;
  std::vector<double> cumulative;  // sum of probability[0..h]
  std::vector<ClampEvent> clamps;

  bool clamped(std::size_t index) const;
};

/// How branches of the shorter path that conflict with the longer path's
/// branch set are weighed in co_longest_bound.
enum class ConflictModel {
  kConditional,  ///< a conflicting branch cannot execute alongside: weight 0
  kLiteral,      ///< unconditional branch probability (unsound on S1 pairs)
};

/// Product of branch probabilities over H; 1 for the empty set. Probabilities
/// are the renormalized ones held by the DagIndex.
double exec_probability(const DagIndex& dag, std::span<const BranchRef> branches);

/// Upper bound on the probability that `longer` executes while `shorter`
/// does not.
double co_longest_bound(const DagIndex& dag, const PathContext& longer, const PathContext& shorter,
                        ConflictModel model = ConflictModel::kConditional);

/// Walks the ordered set from the longest path down; see README for the
/// recurrence and the clamping rules.
ProbabilityAssignment assign_probabilities(const DagIndex& dag, const LambdaStarSet& lambda_star,
                                           ConflictModel model = ConflictModel::kConditional);

}  // namespace pdag
