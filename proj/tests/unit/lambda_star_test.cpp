#include <gtest/gtest.h>

#include <map>
#include <set>

#include "pdag/dag_index.hpp"
#include "pdag/lambda_star.hpp"
#include "pdag/lowerbound.hpp"
#include "pdag/paths.hpp"
#include "pdag/response.hpp"
#include "pdag/workbench.hpp"
#include "support.hpp"

using namespace pdag;
using namespace testing_support;

namespace {

std::vector<std::vector<NodeId>> members(const LambdaStarSet& set) {
  std::vector<std::vector<NodeId>> out;
  for (const auto& e : set.entries) out.push_back(e.path.nodes);
  return out;
}

// Straight pairwise walk over every candidate path, with sub-structures built
// explicitly.
std::vector<std::vector<NodeId>> literal_lambda_star(const DagIndex& dag) {
  std::vector<LambdaStarEntry> cand;
  for (PathContext& p : candidate_paths(dag, delta(dag))) {
    double i = interference(dag, p);
    cand.push_back({std::move(p), i});
  }
  std::sort(cand.begin(), cand.end(), precedes);
  std::vector<const PathContext*> kept;
  for (const auto& b : cand) {
    bool removed = false;
    for (const PathContext* a : kept) {
      PairClass cls = classify_pair(*a, b.path);
      if (cls == PairClass::kS2 && a->length >= b.path.length) removed = true;
      if (cls == PairClass::kS3 && delta(dag, build_substructure(dag, *a, b.path)) > b.path.length) removed = true;
      if (removed) break;
    }
    if (!removed) kept.push_back(&b.path);
  }
  std::vector<std::vector<NodeId>> out;
  for (const PathContext* p : kept) out.push_back(p->nodes);
  return out;
}

}  // namespace

TEST(Classify, ExampleA) {
  DagIndex dag(fixture("ex_a.json"));
  PathContext a = path_context(dag, kLambdaA), b = path_context(dag, kLambdaB), c = path_context(dag, kLambdaC);
  EXPECT_EQ(classify_pair(a, b), PairClass::kS1);
  EXPECT_EQ(classify_pair(a, c), PairClass::kS3);
  EXPECT_EQ(classify_pair(c, b), PairClass::kS3);
  EXPECT_EQ(classify_pair(a, a), PairClass::kS2);
  EXPECT_EQ(classify_pair(c, c), PairClass::kS2);
}

TEST(Classify, ExampleB) {
  DagIndex dag(fixture("ex_b.json"));
  auto ctx = [&](const std::vector<NodeId>& p) { return path_context(dag, p); };
  EXPECT_EQ(classify_pair(ctx(exb::t1x1), ctx(exb::t2x2)), PairClass::kS1);
  EXPECT_EQ(classify_pair(ctx(exb::t1x1), ctx(exb::t1x2)), PairClass::kS1);
  EXPECT_EQ(classify_pair(ctx(exb::t1x1), ctx(exb::t1y1)), PairClass::kS3);
  EXPECT_EQ(classify_pair(ctx(exb::t2x1), ctx(exb::t1y1)), PairClass::kS1);
}

TEST(Classify, IsSymmetric) {
  DagIndex dag(generate_pdag(small_config(1200, 3)));
  auto paths = candidate_paths(dag, 0);
  for (std::size_t a = 0; a < paths.size() && a < 40; ++a)
    for (std::size_t b = 0; b < paths.size() && b < 40; ++b)
      EXPECT_EQ(classify_pair(paths[a], paths[b]), classify_pair(paths[b], paths[a]));
}

TEST(LambdaStar, ExampleA) {
  LambdaStarSet set = compute_lambda_star(DagIndex(fixture("ex_a.json")));
  EXPECT_DOUBLE_EQ(set.delta, 8);
  EXPECT_EQ(members(set), (std::vector<std::vector<NodeId>>{kLambdaA, kLambdaB, kLambdaC}));
  EXPECT_DOUBLE_EQ(set.entries[1].interference, 4);
  EXPECT_DOUBLE_EQ(set.entries[2].interference, 7);
}

TEST(LambdaStar, ExampleB) {
  LambdaStarSet set = compute_lambda_star(DagIndex(fixture("ex_b.json")));
  EXPECT_DOUBLE_EQ(set.delta, 14);
  EXPECT_EQ(members(set), (std::vector<std::vector<NodeId>>{exb::t1x1, exb::t1x2, exb::t2x1, exb::t2x2}));
  EXPECT_EQ(set.candidate_count, 6u);
  EXPECT_EQ(set.removed_by_substructure, 2u);
  EXPECT_EQ(set.removed_same_branches, 0u);
}

TEST(LambdaStar, NoStructures) {
  PDag p = chain({1, 2, 3});
  p.nodes.push_back({4, 10});
  p.edges.push_back({1, 4});
  p.edges.push_back({4, 3});
  LambdaStarSet set = compute_lambda_star(DagIndex(p));
  EXPECT_EQ(members(set), (std::vector<std::vector<NodeId>>{{1, 4, 3}}));
}

TEST(LambdaStar, OrderedByPrecedes) {
  for (int i = 0; i < 20; ++i) {
    LambdaStarSet set = compute_lambda_star(DagIndex(generate_pdag(small_config(1300 + i, i))));
    for (std::size_t h = 1; h < set.size(); ++h) EXPECT_TRUE(precedes(set.entries[h - 1], set.entries[h]));
  }
}

TEST(LambdaStar, MatchesLiteralPairwiseWalk) {
  for (int i = 0; i < 60; ++i) {
    DagIndex dag(generate_pdag(small_config(1400 + i, i)));
    EXPECT_EQ(members(compute_lambda_star(dag)), literal_lambda_star(dag)) << "seed " << 1400 + i;
  }
}

// Every member is the longest path of some scenario, and every path that is
// ever longest is a member or shares its branch set and length with one.
TEST(LambdaStar, AgreesWithScenarioEnumeration) {
  for (int i = 0; i < 80; ++i) {
    PDag p = generate_pdag(small_config(1500 + i, i));
    DagIndex dag(p);
    LambdaStarSet set = compute_lambda_star(dag);
    std::set<std::vector<NodeId>> exact;
    for (const RefOutcome& o : reference_outcomes(p)) exact.insert(o.tied.begin(), o.tied.end());

    std::set<std::pair<std::vector<BranchRef>, double>> covered;
    for (const auto& e : set.entries) {
      EXPECT_TRUE(exact.count(e.path.nodes)) << "seed " << 1500 + i;
      covered.insert({e.path.branches, e.path.length});
    }
    for (const auto& path : exact) {
      PathContext c = path_context(dag, path);
      EXPECT_TRUE(covered.count({c.branches, c.length})) << "seed " << 1500 + i;
    }
  }
}

TEST(LambdaStar, CoversEveryScenario) {
  for (int i = 0; i < 40; ++i) {
    PDag p = generate_pdag(small_config(1600 + i, i));
    DagIndex dag(p);
    LambdaStarSet set = compute_lambda_star(dag);
    for (const RefOutcome& o : reference_outcomes(p)) {
      bool found = false;
      for (const auto& e : set.entries) {
        bool consistent = true;
        for (const BranchRef& b : e.path.branches) consistent = consistent && o.choice.at(b.structure) == b.branch;
        found = found || (consistent && std::abs(e.path.length - o.longest) < 1e-9);
      }
      EXPECT_TRUE(found) << "seed " << 1600 + i;
    }
  }
}
