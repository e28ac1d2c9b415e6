#pragma once

#include <span>
#include <vector>

#include "pdag/dag_index.hpp"
#include "pdag/lambda_star.hpp"
#include "pdag/paths.hpp"
#include "pdag/probability.hpp"

namespace pdag {

struct DistributionPoint {
  double response = 0.0;
  double mass = 0.0;

  friend bool operator==(const DistributionPoint&, const DistributionPoint&) = default;
};

/// Discrete response-time distribution. Points are sorted by response time,
/// response times are distinct (exactly equal values are merged) and masses
/// are positive. Total mass may be below 1.
class RtDistribution {
 public:
  RtDistribution() = default;
  /// Sorts, merges exactly equal response times, drops non-positive masses.
  explicit RtDistribution(std::vector<DistributionPoint> points);

  std::span<const DistributionPoint> points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  double total_mass() const;
  double min_response() const { return points_.front().response; }
  double max_response() const { return points_.back().response; }

  /// Mass at response times >= t. Both queries cap at 1: merged masses can
  /// add up a few ulps past it.
  double exceedance(double t) const;
  /// Mass at response times <= t.
  double cdf(double t) const;

  friend bool operator==(const RtDistribution&, const RtDistribution&) = default;

 private:
  std::vector<DistributionPoint> points_;
};

/// Worst-case workload that can interfere with `path` when it is the
/// longest: unconditional nodes off the path, off-path nodes of the branches
/// the path takes, and the largest branch volume of every structure the
/// path does not enter.
double interference(const DagIndex& dag, const PathContext& path);

/// len(path) + interference(path) / cores. Throws std::invalid_argument for
/// cores < 1.
double response_bound(const DagIndex& dag, const PathContext& path, int cores);

struct ResponseEntry {
  PathContext path;
  double probability = 0.0;
  double interference = 0.0;
  double response = 0.0;
  /// Largest response bound among this path and every later one; the
  /// path's probability mass is placed here.
  double placed_at = 0.0;
  int cores = 1;
};

std::vector<ResponseEntry> response_entries(const DagIndex& dag, const LambdaStarSet& lambda_star,
                                            const ProbabilityAssignment& probs, int cores);

/// Mass P(lambda_h) at placed_at(lambda_h), for every path with positive
/// probability. The exceedance at any t is then the cumulative probability
/// up to the last path whose bound reaches t. Placing mass at the path's own
/// bound instead would undercount whenever a shorter path carries a larger
/// bound (more interference) than a longer one.
RtDistribution build_distribution(const DagIndex& dag, const LambdaStarSet& lambda_star,
                                  const ProbabilityAssignment& probs, int cores);

namespace detail {

/// Replaces every value by the maximum of itself and all later values.
void suffix_max(std::vector<double>& values);

}  // namespace detail

/// Mass at response times <= deadline. Unassigned mass counts as a miss.
double meet_probability(const RtDistribution& dist, double deadline);

}  // namespace pdag
