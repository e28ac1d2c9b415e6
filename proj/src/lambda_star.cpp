#include "pdag/lambda_star.hpp"

#include <algorithm>
#include <map>

#include "pdag/detail/tolerance.hpp"
#include "pdag/lowerbound.hpp"
#include "pdag/response.hpp"

namespace pdag {

PairClass classify_pair(const PathContext& a, const PathContext& b) {
  bool identical = true;
  const std::size_t n = std::max(a.selection.size(), b.selection.size());
  for (std::size_t s = 0; s < n; ++s) {
    int x = s < a.selection.size() ? a.selection[s] : -1;
    int y = s < b.selection.size() ? b.selection[s] : -1;
    if (x >= 0 && y >= 0 && x != y) return PairClass::kS1;
    if (x != y) identical = false;
  }
  return identical ? PairClass::kS2 : PairClass::kS3;
}

bool precedes(const LambdaStarEntry& a, const LambdaStarEntry& b) {
  if (a.path.length != b.path.length) return a.path.length > b.path.length;
  if (a.interference != b.interference) return a.interference < b.interference;
  return a.path.nodes < b.path.nodes;
}

LambdaStarSet compute_lambda_star(const DagIndex& dag) {
  LambdaStarSet out;
  out.delta = delta(dag);

  // Only the leading path of each branch set can survive: any later path with
  // the same set falls to it by the same-branches rule, or to whichever
  // survivor removed it. Starting from one path per set yields the same result
  // as walking every candidate.
  std::vector<LambdaStarEntry> candidates;
  for (PathContext& p : candidate_heads(dag, out.delta)) {
    double i = interference(dag, p);
    candidates.push_back({std::move(p), i});
  }
  out.candidate_count = candidates.size();
  std::sort(candidates.begin(), candidates.end(), precedes);

  detail::SubstructureDelta sub_delta(dag);
  struct Survivor {
    std::size_t index;
    std::map<std::vector<int>, double> bounds;  // keyed by the minimized structures
  };
  std::vector<Survivor> survivors;
  std::vector<int> unique_structures;

  for (std::size_t b = 0; b < candidates.size(); ++b) {
    const PathContext& pb = candidates[b].path;
    bool removed = false;
    for (Survivor& sa : survivors) {
      const PathContext& pa = candidates[sa.index].path;
      PairClass cls = classify_pair(pa, pb);
      if (cls == PairClass::kS1) continue;
      if (cls == PairClass::kS2) {
        if (detail::time_ge(pa.length, pb.length)) {
          ++out.removed_same_branches;
          removed = true;
          break;
        }
        continue;
      }
      unique_structures.clear();
      for (std::size_t s = 0; s < pa.selection.size(); ++s)
        if (pa.selection[s] >= 0 && pb.selection[s] < 0) unique_structures.push_back(static_cast<int>(s));
      double bound;
      if (unique_structures.empty()) {
        bound = pa.length;
      } else {
        auto it = sa.bounds.find(unique_structures);
        if (it == sa.bounds.end()) it = sa.bounds.emplace(unique_structures, sub_delta(pa, unique_structures)).first;
        bound = it->second;
      }
      if (detail::time_gt(bound, pb.length)) {
        ++out.removed_by_substructure;
        removed = true;
        break;
      }
    }
    if (!removed) survivors.push_back({b, {}});
  }

  out.entries.reserve(survivors.size());
  for (const Survivor& s : survivors) out.entries.push_back(std::move(candidates[s.index]));
  return out;
}

}  // namespace pdag
