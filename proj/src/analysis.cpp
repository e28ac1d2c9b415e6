#include "pdag/analysis.hpp"

namespace pdag {

Analysis analyze(const DagIndex& dag) {
  Analysis out;
  out.lambda_star = compute_lambda_star(dag);
  out.probabilities = assign_probabilities(dag, out.lambda_star);
  return out;
}

RtDistribution distribution(const DagIndex& dag, const Analysis& analysis, int cores) {
  return build_distribution(dag, analysis.lambda_star, analysis.probabilities, cores);
}

}  // namespace pdag
