#include "pdag/probability.hpp"

#include <algorithm>

namespace pdag {

namespace {

// Remaining mass at or below this is treated as exhausted.
constexpr double kMassTolerance = 1e-12;

double selection_probability(const DagIndex& dag, const std::vector<int>& selection) {
  double p = 1.0;
  for (std::size_t s = 0; s < selection.size(); ++s)
    if (selection[s] >= 0) p *= dag.structure(s).branches[selection[s]].prob;
  return p;
}

}  // namespace

bool ProbabilityAssignment::clamped(std::size_t index) const {
  return std::any_of(clamps.begin(), clamps.end(), [index](const ClampEvent& e) { return e.index == index; });
}

double exec_probability(const DagIndex& dag, std::span<const BranchRef> branches) {
  double p = 1.0;
  for (const BranchRef& ref : branches) {
    int s = dag.structure_position(ref.structure);
    int k = dag.branch_position(s, ref.branch);
    if (k < 0) throw std::out_of_range("unknown branch index " + std::to_string(ref.branch));
    p *= dag.structure(s).branches[k].prob;
  }
  return p;
}

double co_longest_bound(const DagIndex& dag, const PathContext& longer, const PathContext& shorter,
                        ConflictModel model) {
  double longer_executes = selection_probability(dag, longer.selection);
  double shorter_given_longer = 1.0;
  for (std::size_t s = 0; s < shorter.selection.size(); ++s) {
    int k = shorter.selection[s];
    if (k < 0 || longer.selection[s] == k) continue;
    bool conflict = longer.selection[s] >= 0;
    shorter_given_longer *= (conflict && model == ConflictModel::kConditional) ? 0.0 : dag.structure(s).branches[k].prob;
  }
  return longer_executes * (1.0 - shorter_given_longer);
}

ProbabilityAssignment assign_probabilities(const DagIndex& dag, const LambdaStarSet& lambda_star,
                                           ConflictModel model) {
  const std::size_t count = lambda_star.entries.size();
  ProbabilityAssignment out;
  out.probability.assign(count, 0.0);
  out.cumulative.assign(count, 0.0);

  double cumulative = 0.0;
  std::size_t h = 0;
  for (; h < count; ++h) {
    const PathContext& path = lambda_star.entries[h].path;
    // P = 1 - cumulative - tail, where tail = max(0, 1 - covered) is the mass
    // of strictly later paths. Written out per case to avoid cancellation.
    double p = 1.0 - cumulative;
    if (h + 1 < count) {
      double covered = selection_probability(dag, path.selection);
      for (std::size_t l = 0; l < h; ++l) covered += co_longest_bound(dag, lambda_star.entries[l].path, path, model);
      if (covered < 1.0) p = covered - cumulative;
    }
    if (p < 0.0) {
      out.clamps.push_back({h, ClampRule::kLower});
      p = 0.0;
    } else if (p > 1.0 - cumulative) {
      out.clamps.push_back({h, ClampRule::kUpper});
      p = 1.0 - cumulative;
    }
    out.probability[h] = p;
    cumulative += p;
    out.cumulative[h] = cumulative;
    if (h + 1 < count && 1.0 - cumulative <= kMassTolerance) {
      out.probability[h] += 1.0 - cumulative;
      cumulative = 1.0;
      out.cumulative[h] = cumulative;
      ++h;
      break;
    }
  }
  for (; h < count; ++h) {
    out.clamps.push_back({h, ClampRule::kTerminated});
    out.cumulative[h] = cumulative;
  }
  return out;
}

}  // namespace pdag
