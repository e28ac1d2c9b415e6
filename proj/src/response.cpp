#include "pdag/response.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdag {

RtDistribution::RtDistribution(std::vector<DistributionPoint> points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const DistributionPoint& a, const DistributionPoint& b) { return a.response < b.response; });
  for (const DistributionPoint& p : points) {
    if (!(p.mass > 0.0)) continue;
    if (!points_.empty() && points_.back().response == p.response)
      points_.back().mass += p.mass;
    else
      points_.push_back(p);
  }
}

double RtDistribution::total_mass() const {
  double total = 0.0;
  for (const DistributionPoint& p : points_) total += p.mass;
  return total;
}

double RtDistribution::exceedance(double t) const {
  double total = 0.0;
  for (auto it = points_.rbegin(); it != points_.rend() && it->response >= t; ++it) total += it->mass;
  return std::min(total, 1.0);
}

double RtDistribution::cdf(double t) const {
  double total = 0.0;
  for (auto it = points_.begin(); it != points_.end() && it->response <= t; ++it) total += it->mass;
  return std::min(total, 1.0);
}

double interference(const DagIndex& dag, const PathContext& path) {
  std::vector<char> on_path(dag.node_count(), 0);
  for (NodeId id : path.nodes) on_path[dag.position(id)] = 1;

  double unconditional = 0.0;
  for (std::size_t v = 0; v < dag.node_count(); ++v)
    if (!on_path[v] && !dag.conditional(static_cast<int>(v))) unconditional += dag.wcet(static_cast<int>(v));

  double taken = 0.0, untouched = 0.0;
  for (std::size_t s = 0; s < dag.structure_count(); ++s) {
    const auto& info = dag.structure(s);
    int k = s < path.selection.size() ? path.selection[s] : -1;
    if (k < 0) {
      untouched += info.max_volume;
      continue;
    }
    for (int v : info.branches[k].nodes)
      if (!on_path[v]) taken += dag.wcet(v);
  }
  return unconditional + taken + untouched;
}

double response_bound(const DagIndex& dag, const PathContext& path, int cores) {
  if (cores < 1) throw std::invalid_argument("core count must be at least 1");
  return path.length + interference(dag, path) / cores;
}

std::vector<ResponseEntry> response_entries(const DagIndex& /*dag*/, const LambdaStarSet& lambda_star,
                                            const ProbabilityAssignment& probs, int cores) {
  if (cores < 1) throw std::invalid_argument("core count must be at least 1");
  std::vector<double> placed;
  placed.reserve(lambda_star.entries.size());
  for (const LambdaStarEntry& e : lambda_star.entries) placed.push_back(e.path.length + e.interference / cores);
  detail::suffix_max(placed);

  std::vector<ResponseEntry> out;
  out.reserve(lambda_star.entries.size());
  for (std::size_t h = 0; h < lambda_star.entries.size(); ++h) {
    const LambdaStarEntry& e = lambda_star.entries[h];
    ResponseEntry r;
    r.path = e.path;
    r.probability = probs.probability.at(h);
    r.interference = e.interference;
    r.response = e.path.length + e.interference / cores;
    r.placed_at = placed[h];
    r.cores = cores;
    out.push_back(std::move(r));
  }
  return out;
}

RtDistribution build_distribution(const DagIndex& dag, const LambdaStarSet& lambda_star,
                                  const ProbabilityAssignment& probs, int cores) {
  std::vector<DistributionPoint> points;
  for (const ResponseEntry& e : response_entries(dag, lambda_star, probs, cores))
    if (e.probability > 0.0) points.push_back({e.placed_at, e.probability});
  return RtDistribution(std::move(points));
}

double meet_probability(const RtDistribution& dist, double deadline) { return dist.cdf(deadline); }

namespace detail {

void suffix_max(std::vector<double>& values) {
  for (std::size_t i = values.size(); i-- > 1;) values[i - 1] = std::max(values[i - 1], values[i]);
}

}  // namespace detail

}  // namespace pdag
