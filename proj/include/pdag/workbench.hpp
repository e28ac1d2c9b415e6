#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdag/analysis.hpp"
#include "pdag/dag_index.hpp"
#include "pdag/model.hpp"
#include "pdag/oracle.hpp"
#include "pdag/response.hpp"

namespace pdag {

/// Random layered p-DAG parameters. Defaults reproduce the standard
/// evaluation setup (m = 4 is chosen by the caller).
struct GeneratorConfig {
  int min_layers = 5;
  int max_layers = 8;
  int min_width = 2;
  int max_width = 6;            // p
  double edge_probability = 0.2;
  int min_period = 1;
  int max_period = 1400;
  double utilization = 0.5;
  int structures = 3;           // |Theta|
  int branches = 3;
  int min_branch_layers = 2;
  int max_branch_layers = 4;
  int min_branch_width = 2;
  int max_branch_width = 4;
  double psr = 0.4;             // share of workload inside structures
  /// Branch volumes are drawn in [1 - spread, 1 + spread] times the
  /// structure's mean budget.
  double branch_spread = 0.5;
  std::uint64_t seed = 0;
};

/// WCETs are multiples of this quantum, so path sums are exact in double.
inline constexpr double kWcetQuantum = 1.0 / 1024.0;

/// Deterministic in `config.seed`. Throws ConfigError for invalid or
/// infeasible configurations.
PDag generate_pdag(const GeneratorConfig& config);

/// Share of the workload inside structures, counting each structure by its
/// mean branch volume.
double structure_workload_fraction(const DagIndex& dag);

/// Non-overlapping area ratio: integral of |CDF_test - CDF_baseline| divided
/// by the integral of CDF_baseline, both over the union of the supports.
/// Throws ZeroAreaError when the baseline area is zero (unless the two
/// distributions are identical, which yields 0).
double noar(const RtDistribution& test, const RtDistribution& baseline);

enum class CoreMethod { kAnalysis, kEnumeration, kGraham };

inline constexpr int kMaxCores = 1024;

/// Probability of meeting a deadline as a function of the core count, for
/// one instance and one method.
class CoreSizer {
 public:
  /// Enumeration throws ScenarioCapExceeded above `scenario_cap`.
  CoreSizer(const DagIndex& dag, CoreMethod method, double deadline,
            std::uint64_t scenario_cap = kDefaultScenarioCap);
  /// Analysis method from a precomputed analysis.
  CoreSizer(const DagIndex& dag, const Analysis& analysis, double deadline);

  double meet(int cores) const;

  /// Smallest core count in [1, kMaxCores] whose meet probability reaches
  /// `acceptance` (in (0, 1]). Throws InfeasibleError, or ConfigError for an
  /// acceptance outside (0, 1].
  int min_cores(double acceptance) const;

 private:
  // Each term contributes `mass` when base + spread / m <= deadline.
  struct Term {
    double base;
    double spread;
    double mass;
  };
  std::vector<Term> terms_;
  double deadline_;
  // Analysis terms follow the longest-path order and take the suffix maximum
  // of their bounds, as in build_distribution.
  bool ordered_ = false;
};

/// Uses the instance deadline.
int min_cores(const DagIndex& dag, double acceptance, CoreMethod method,
              std::uint64_t scenario_cap = kDefaultScenarioCap);

struct PathDeviation {
  std::vector<NodeId> path;
  double length = 0.0;
  double analysis = 0.0;  // cumulative exceedance from the analysis
  double exact = 0.0;     // exact probability the longest path is >= length
  double deviation = 0.0; // analysis - exact
};

struct ComparisonReport {
  int cores = 1;
  double noar = 0.0;
  std::vector<PathDeviation> deviations;
  /// Analysis exceedance >= oracle exceedance everywhere (tolerance 1e-9).
  bool dominance = true;
  double analysis_seconds = 0.0;
  double oracle_seconds = 0.0;
  RtDistribution analysis;
  RtDistribution oracle;
};

/// Runs both pipelines on one instance. Throws ScenarioCapExceeded.
ComparisonReport compare(const DagIndex& dag, int cores, std::uint64_t scenario_cap = kDefaultScenarioCap);

/// True when `upper` has at least the exceedance of `lower` at every
/// support point of either, within `tolerance`.
bool dominates(const RtDistribution& upper, const RtDistribution& lower, double tolerance = 1e-9);

inline constexpr std::array<double, 4> kAcceptanceLevels{0.7, 0.8, 0.9, 1.0};

/// One generated instance of a sweep. Optional fields are empty when the
/// oracle was skipped (over the cap) or no core count was feasible.
struct InstanceRecord {
  std::size_t config = 0;  // index into the config list
  std::uint64_t seed = 0;
  int structures = 0;
  int max_width = 0;
  double psr = 0.0;
  int cores = 1;
  std::size_t lambda_star_size = 0;
  std::optional<double> noar;
  double analysis_seconds = 0.0;
  std::optional<double> oracle_seconds;
  std::array<std::optional<int>, 4> cores_at;
};

struct SweepCell {
  GeneratorConfig config;
  std::size_t instances = 0;
  double mean_analysis_seconds = 0.0;
  double median_analysis_seconds = 0.0;
  bool oracle_skipped = false;
  std::optional<double> mean_oracle_seconds;
  std::optional<double> median_oracle_seconds;
  std::optional<double> mean_noar;
  std::optional<double> median_noar;
  std::optional<double> p90_noar;
};

/// Instance i of a config uses seed config.seed + i. Rows are ordered by
/// config, then instance, whatever `jobs` is.
std::vector<InstanceRecord> bench_instances(const std::vector<GeneratorConfig>& configs, int cores,
                                            std::size_t per_config, unsigned jobs = 1,
                                            std::uint64_t scenario_cap = kDefaultScenarioCap);

std::vector<SweepCell> summarize_sweep(const std::vector<GeneratorConfig>& configs,
                                       const std::vector<InstanceRecord>& records);

std::vector<SweepCell> bench_sweep(const std::vector<GeneratorConfig>& configs, int cores, std::size_t per_config,
                                   unsigned jobs = 1, std::uint64_t scenario_cap = kDefaultScenarioCap);

/// Nearest-rank percentile (q in [0, 1]) of a non-empty sample.
double percentile(std::vector<double> values, double q);

}  // namespace pdag
