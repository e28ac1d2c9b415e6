#include <gtest/gtest.h>

#include <cmath>

#include "pdag/analysis.hpp"
#include "pdag/dag_index.hpp"
#include "pdag/errors.hpp"
#include "pdag/oracle.hpp"
#include "pdag/workbench.hpp"
#include "support.hpp"

using namespace pdag;
using namespace testing_support;

TEST(Generator, Deterministic) {
  GeneratorConfig c;
  c.seed = 42;
  EXPECT_EQ(serialize_pdag(generate_pdag(c)), serialize_pdag(generate_pdag(c)));
  GeneratorConfig d = c;
  d.seed = 43;
  EXPECT_NE(serialize_pdag(generate_pdag(c)), serialize_pdag(generate_pdag(d)));
}

TEST(Generator, DefaultShape) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    PDag p = generate_pdag(c);
    ASSERT_TRUE(validate(p).ok);
    ASSERT_EQ(p.structures.size(), 3u);
    for (const auto& s : p.structures) {
      ASSERT_EQ(s.branches.size(), 3u);
      double sum = 0;
      for (const auto& b : s.branches) {
        EXPECT_GT(b.prob, 0.0);
        sum += b.prob;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    EXPECT_EQ(p.deadline, p.period);
    EXPECT_GE(p.period, 1);
    EXPECT_LE(p.period, 1400);
    EXPECT_EQ(scenario_count(p), 27u);
    for (const Node& n : p.nodes) EXPECT_EQ(std::fmod(n.wcet, kWcetQuantum), 0.0);
  }
}

TEST(Generator, WorkloadSplit) {
  double fraction = 0;
  const int runs = 100;
  for (int seed = 0; seed < runs; ++seed) {
    GeneratorConfig c;
    c.seed = seed;
    PDag p = generate_pdag(c);
    DagIndex dag(p);
    double total = p.period * c.utilization;
    double slack = static_cast<double>(p.nodes.size()) * kWcetQuantum;
    EXPECT_NEAR(dag.unconditional_volume(), (1 - c.psr) * total, slack);
    for (std::size_t s = 0; s < dag.structure_count(); ++s)
      for (const auto& b : dag.structure(s).branches) {
        double mean = c.psr * total / c.structures;
        EXPECT_GE(b.volume, (1 - c.branch_spread) * mean - slack);
        EXPECT_LE(b.volume, (1 + c.branch_spread) * mean + slack);
      }
    fraction += structure_workload_fraction(dag);
  }
  fraction /= runs;
  EXPECT_GT(fraction, 0.35);
  EXPECT_LT(fraction, 0.45);
}

TEST(Generator, ZeroStructures) {
  GeneratorConfig c;
  c.structures = 0;
  c.seed = 5;
  PDag p = generate_pdag(c);
  EXPECT_TRUE(p.structures.empty());
  EXPECT_NEAR(DagIndex(p).unconditional_volume(), p.period * c.utilization, p.nodes.size() * kWcetQuantum);
}

TEST(Generator, RejectsBadConfigs) {
  auto bad = [](auto mutate) {
    GeneratorConfig c;
    mutate(c);
    EXPECT_THROW(generate_pdag(c), ConfigError);
  };
  bad([](GeneratorConfig& c) { c.psr = 0; });
  bad([](GeneratorConfig& c) { c.psr = 1; });
  bad([](GeneratorConfig& c) { c.branches = 1; });
  bad([](GeneratorConfig& c) { c.structures = -1; });
  bad([](GeneratorConfig& c) { c.min_layers = 9; });
  bad([](GeneratorConfig& c) { c.edge_probability = 1.5; });
  bad([](GeneratorConfig& c) { c.utilization = 0; });
  bad([](GeneratorConfig& c) { c.branch_spread = 1; });
  // Not enough interior nodes for the requested structures.
  bad([](GeneratorConfig& c) {
    c.min_layers = c.max_layers = 1;
    c.min_width = c.max_width = 2;
    c.structures = 3;
  });
}

TEST(Noar, Examples) {
  RtDistribution a({{10, 0.7}, {13, 0.3}});
  EXPECT_DOUBLE_EQ(noar(a, a), 0.0);
  EXPECT_DOUBLE_EQ(noar(RtDistribution({{1, 0.5}, {3, 0.5}}), RtDistribution({{1, 1.0}})), 0.5);
  EXPECT_DOUBLE_EQ(noar(RtDistribution({{5, 1.0}}), RtDistribution({{5, 1.0}})), 0.0);
  EXPECT_THROW(noar(RtDistribution({{1, 1.0}}), RtDistribution({{2, 1.0}})), ZeroAreaError);
  EXPECT_THROW(noar(RtDistribution(), RtDistribution()), ZeroAreaError);
}

TEST(Noar, ExampleBAgainstHandComputedOracle) {
  // On two cores the eight scenarios land at 16.5, 17, ..., 22 (mass 1/8
  // each) and the analysis puts 1/4 at 17, 18, 21 and 22. The CDFs differ by
  // 1/8 on four half-unit intervals; the baseline area over [16.5, 22] is 2.75.
  ComparisonReport r = compare(DagIndex(fixture("ex_b.json")), 2);
  EXPECT_DOUBLE_EQ(r.noar, 0.25 / 2.75);
  EXPECT_TRUE(r.dominance);
  ASSERT_EQ(r.deviations.size(), 4u);
  for (const auto& d : r.deviations) EXPECT_DOUBLE_EQ(d.deviation, 0.0);
  EXPECT_DOUBLE_EQ(r.deviations[1].exact, 0.5);
}

TEST(Compare, ExampleA) {
  // Analysis {11.5: 0.7, 13: 0.3} against the exact {10: 0.7, 13: 0.3}: the
  // curves differ by 0.7 over [10, 11.5), and the baseline area is 2.1.
  ComparisonReport r = compare(DagIndex(fixture("ex_a.json")), 2);
  EXPECT_EQ(r.oracle, RtDistribution({{10, 0.7}, {13, 0.3}}));
  EXPECT_DOUBLE_EQ(r.noar, 0.5);
  for (const auto& d : r.deviations) EXPECT_DOUBLE_EQ(d.deviation, 0.0);
  EXPECT_TRUE(r.dominance);
  EXPECT_EQ(r.cores, 2);
  EXPECT_THROW(compare(DagIndex(fixture("ex_b.json")), 2, 4), ScenarioCapExceeded);
}

TEST(Dominates, Examples) {
  RtDistribution lo({{1, 0.5}, {2, 0.5}}), hi({{2, 1.0}});
  EXPECT_TRUE(dominates(hi, lo));
  EXPECT_FALSE(dominates(lo, hi));
  EXPECT_TRUE(dominates(lo, lo));
}

TEST(MinCores, ExampleA) {
  DagIndex dag(fixture("ex_a.json"));
  // lambda_C (bound 8 + 7/m) trails lambda_B, so 0.7 needs 8 + 7/m <= 12.
  EXPECT_EQ(min_cores(dag, 0.7, CoreMethod::kAnalysis), 2);
  EXPECT_EQ(min_cores(dag, 1.0, CoreMethod::kAnalysis), 4);
  EXPECT_EQ(min_cores(dag, 0.7, CoreMethod::kEnumeration), 1);
  EXPECT_EQ(min_cores(dag, 1.0, CoreMethod::kEnumeration), 4);
  // Graham over the whole graph: longest 11, worst volume 15.
  EXPECT_EQ(min_cores(dag, 0.7, CoreMethod::kGraham), 4);
  EXPECT_THROW(min_cores(dag, 0.0, CoreMethod::kAnalysis), ConfigError);
  EXPECT_THROW(min_cores(dag, 1.1, CoreMethod::kAnalysis), ConfigError);
  EXPECT_THROW(CoreSizer(dag, CoreMethod::kAnalysis, 10.5).min_cores(1.0), InfeasibleError);
  EXPECT_EQ(CoreSizer(dag, CoreMethod::kAnalysis, 10.5).min_cores(0.7), 3);
  EXPECT_THROW(CoreSizer(DagIndex(fixture("ex_b.json")), CoreMethod::kEnumeration, 30, 2), ScenarioCapExceeded);
}

TEST(MinCores, MethodsAreOrdered) {
  for (int i = 0; i < 60; ++i) {
    PDag p = generate_pdag(small_config(3000 + i, i));
    // Tight but feasible: 5% above the worst longest path.
    double longest = 0;
    for (const RefOutcome& o : reference_outcomes(p)) longest = std::max(longest, o.longest);
    p.deadline = 1.05 * longest;
    DagIndex dag(p);
    CoreSizer e(dag, CoreMethod::kEnumeration, p.deadline), a(dag, CoreMethod::kAnalysis, p.deadline),
        g(dag, CoreMethod::kGraham, p.deadline);
    for (int m : {1, 2, 3, 4, 8}) {
      EXPECT_GE(e.meet(m) + 1e-9, a.meet(m)) << "seed " << 3000 + i;
      EXPECT_GE(a.meet(m) + 1e-9, g.meet(m)) << "seed " << 3000 + i;
    }
    for (double acc : kAcceptanceLevels) {
      int ce = e.min_cores(acc), ca = a.min_cores(acc), cg = g.min_cores(acc);
      EXPECT_LE(ce, ca);
      EXPECT_LE(ca, cg);
      EXPECT_GE(a.meet(ca), acc - 1e-12);
      if (ca > 1) EXPECT_LT(a.meet(ca - 1), acc - 1e-12);
    }
  }
}

TEST(Percentile, NearestRank) {
  EXPECT_DOUBLE_EQ(percentile({5, 1, 4, 2, 3}, 0.5), 3);
  EXPECT_DOUBLE_EQ(percentile({5, 1, 4, 2, 3}, 0.9), 5);
  EXPECT_DOUBLE_EQ(percentile({5, 1, 4, 2, 3}, 0.0), 1);
  EXPECT_DOUBLE_EQ(percentile({7}, 0.9), 7);
  EXPECT_THROW(percentile({}, 0.5), std::invalid_argument);
}

TEST(Bench, EmptyConfigList) {
  EXPECT_TRUE(bench_instances({}, 4, 10).empty());
  EXPECT_TRUE(bench_sweep({}, 4, 10).empty());
}

TEST(Bench, SkipsOracleAboveCap) {
  GeneratorConfig big;
  big.structures = 10;
  big.seed = 7;
  GeneratorConfig small;
  small.structures = 2;
  small.seed = 7;
  auto rows = bench_instances({small, big}, 4, 3, 2, 3 * 3 * 3 * 3 * 3 * 3 * 3);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(rows[i].config, i / 3);
    EXPECT_EQ(rows[i].seed, 7 + i % 3);
    EXPECT_EQ(rows[i].noar.has_value(), i < 3);
    EXPECT_EQ(rows[i].oracle_seconds.has_value(), i < 3);
    EXPECT_GT(rows[i].lambda_star_size, 0u);
  }
  auto cells = summarize_sweep({small, big}, rows);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_FALSE(cells[0].oracle_skipped);
  EXPECT_TRUE(cells[0].mean_noar.has_value());
  EXPECT_TRUE(cells[1].oracle_skipped);
  EXPECT_FALSE(cells[1].mean_noar.has_value());
  EXPECT_EQ(cells[1].instances, 3u);
}

TEST(Bench, JobsDoNotChangeResults) {
  GeneratorConfig c;
  c.seed = 11;
  auto one = bench_instances({c}, 4, 6, 1);
  auto many = bench_instances({c}, 4, 6, 4);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].seed, many[i].seed);
    EXPECT_EQ(one[i].noar, many[i].noar);
    EXPECT_EQ(one[i].cores_at, many[i].cores_at);
    EXPECT_EQ(one[i].lambda_star_size, many[i].lambda_star_size);
  }
}

TEST(Compare, AnalysisDominatesEnumeration) {
  // The exceedance curve of the analysis must sit on or above the exact one
  // at every point, on any core count.
  for (int i = 0; i < 80; ++i) {
    DagIndex dag(generate_pdag(small_config(5100 + i, i)));
    Analysis a = analyze(dag);
    for (int m : {1, 2, 4, 8}) {
      RtDistribution exact = enum_distribution(dag, m);
      RtDistribution bound = distribution(dag, a, m);
      for (const DistributionPoint& p : exact.points())
        EXPECT_GE(bound.exceedance(p.response) + 1e-9, exact.exceedance(p.response))
            << "instance " << i << " m=" << m << " t=" << p.response;
    }
  }
}
