#pragma once

#include "pdag/dag_index.hpp"
#include "pdag/lambda_star.hpp"
#include "pdag/probability.hpp"
#include "pdag/response.hpp"

namespace pdag {

/// Longest-path set plus probabilities: everything the response-time
/// distribution needs apart from the core count.
struct Analysis {
  LambdaStarSet lambda_star;
  ProbabilityAssignment probabilities;
};

Analysis analyze(const DagIndex& dag);

RtDistribution distribution(const DagIndex& dag, const Analysis& analysis, int cores);

}  // namespace pdag
