#include "pdag/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include "pdag/detail/tolerance.hpp"
#include "pdag/errors.hpp"

namespace pdag {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_config(const GeneratorConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError("invalid generator config: " + what); };
  if (c.min_layers < 1 || c.max_layers < c.min_layers) fail("layer range");
  if (c.max_width < 2) fail("max width must be at least 2");
  if (c.min_width < 1 || c.min_width > c.max_width) fail("width range");
  if (!(c.edge_probability >= 0.0 && c.edge_probability <= 1.0)) fail("edge probability must lie in [0, 1]");
  if (c.min_period < 1 || c.max_period < c.min_period) fail("period range");
  if (!(c.utilization > 0.0)) fail("utilization must be positive");
  if (c.structures < 0) fail("structure count must be non-negative");
  if (c.branches < 2) fail("a structure needs at least 2 branches");
  if (c.min_branch_layers < 1 || c.max_branch_layers < c.min_branch_layers) fail("branch layer range");
  if (c.min_branch_width < 1 || c.max_branch_width < c.min_branch_width) fail("branch width range");
  if (!(c.psr > 0.0 && c.psr < 1.0)) fail("psr must lie in (0, 1)");
  if (!(c.branch_spread >= 0.0 && c.branch_spread < 1.0)) fail("branch spread must lie in [0, 1)");
}

double quantize(double w) {
  return std::max(1.0, std::round(w / kWcetQuantum)) * kWcetQuantum;
}

class Generator {
 public:
  explicit Generator(const GeneratorConfig& config) : c_(config), rng_(config.seed) {}

  PDag run();

 private:
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }

  NodeId add_node() {
    NodeId id = next_id_++;
    raw_.push_back(uniform(0.1, 1.0));
    return id;
  }

  // Layered sub-graph: each node links to each node of the previous layer
  // with the edge probability, then nodes still lacking a neighbour in an
  // adjacent layer get one.
  std::vector<std::vector<NodeId>> layered(int min_layers, int max_layers, int min_width, int max_width) {
    std::vector<std::vector<NodeId>> layers(uniform_int(min_layers, max_layers));
    for (auto& layer : layers) {
      layer.resize(uniform_int(min_width, max_width));
      for (NodeId& v : layer) v = add_node();
    }
    std::vector<char> has_pred(next_id_, 0), has_succ(next_id_, 0);
    auto link = [&](NodeId a, NodeId b) {
      edges_.push_back({a, b});
      has_succ[a] = 1;
      has_pred[b] = 1;
    };
    for (std::size_t i = 1; i < layers.size(); ++i)
      for (NodeId b : layers[i])
        for (NodeId a : layers[i - 1])
          if (coin(c_.edge_probability)) link(a, b);
    for (std::size_t i = 1; i < layers.size(); ++i)
      for (NodeId b : layers[i])
        if (!has_pred[b]) link(layers[i - 1][uniform_int(0, static_cast<int>(layers[i - 1].size()) - 1)], b);
    for (std::size_t i = 0; i + 1 < layers.size(); ++i)
      for (NodeId a : layers[i])
        if (!has_succ[a]) link(a, layers[i + 1][uniform_int(0, static_cast<int>(layers[i + 1].size()) - 1)]);
    return layers;
  }

  const GeneratorConfig& c_;
  std::mt19937_64 rng_;
  NodeId next_id_ = 0;
  std::vector<double> raw_;  // raw weight by node id
  std::vector<Edge> edges_;
};

PDag Generator::run() {
  PDag out;
  out.period = uniform_int(c_.min_period, c_.max_period);
  out.deadline = out.period;
  const double total = out.period * c_.utilization;

  NodeId source = add_node();
  auto layers = layered(c_.min_layers, c_.max_layers, c_.min_width, c_.max_width);
  NodeId sink = add_node();
  for (NodeId v : layers.front()) edges_.push_back({source, v});
  for (NodeId v : layers.back()) edges_.push_back({v, sink});

  std::vector<NodeId> interior;
  for (const auto& layer : layers) interior.insert(interior.end(), layer.begin(), layer.end());
  if (c_.structures > static_cast<int>(interior.size()))
    throw ConfigError("cannot place " + std::to_string(c_.structures) + " structures on " +
                      std::to_string(interior.size()) + " replaceable nodes");
  std::shuffle(interior.begin(), interior.end(), rng_);
  interior.resize(c_.structures);

  std::vector<std::vector<NodeId>> branch_nodes;  // per branch, all structures
  std::vector<double> branch_target;
  for (int s = 0; s < c_.structures; ++s) {
    NodeId entry = interior[s];
    NodeId exit = add_node();
    raw_[exit] = raw_[entry] = raw_[entry] / 2.0;
    for (Edge& e : edges_)
      if (e.from == entry) e.from = exit;

    ProbStructure st;
    st.id = s + 1;
    st.entry = entry;
    st.exit = exit;
    std::vector<double> weights;
    for (int k = 0; k < c_.branches; ++k) {
      auto sub = layered(c_.min_branch_layers, c_.max_branch_layers, c_.min_branch_width, c_.max_branch_width);
      for (NodeId v : sub.front()) edges_.push_back({entry, v});
      for (NodeId v : sub.back()) edges_.push_back({v, exit});
      Branch b;
      b.index = k + 1;
      for (const auto& layer : sub) b.nodes.insert(b.nodes.end(), layer.begin(), layer.end());
      std::sort(b.nodes.begin(), b.nodes.end());
      branch_nodes.push_back(b.nodes);
      branch_target.push_back(uniform(1.0 - c_.branch_spread, 1.0 + c_.branch_spread) * c_.psr * total / c_.structures);
      weights.push_back(uniform(0.05, 1.0));
      st.branches.push_back(std::move(b));
    }
    double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    double assigned = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
      st.branches[k].prob = weights[k] / sum;
      assigned += st.branches[k].prob;
    }
    st.branches.back().prob = 1.0 - assigned;
    out.structures.push_back(std::move(st));
  }

  std::vector<double> wcet(next_id_, 0.0);
  std::vector<char> in_branch(next_id_, 0);
  for (std::size_t b = 0; b < branch_nodes.size(); ++b) {
    double raw = 0.0;
    for (NodeId v : branch_nodes[b]) raw += raw_[v];
    for (NodeId v : branch_nodes[b]) {
      wcet[v] = raw_[v] * branch_target[b] / raw;
      in_branch[v] = 1;
    }
  }
  double raw_plain = 0.0;
  for (NodeId v = 0; v < next_id_; ++v)
    if (!in_branch[v]) raw_plain += raw_[v];
  double plain_total = c_.structures > 0 ? (1.0 - c_.psr) * total : total;
  for (NodeId v = 0; v < next_id_; ++v)
    if (!in_branch[v]) wcet[v] = raw_[v] * plain_total / raw_plain;

  for (NodeId v = 0; v < next_id_; ++v) out.nodes.push_back({v, quantize(wcet[v])});
  out.edges = std::move(edges_);
  out = canonical(out);

  ValidationReport report = validate(out);
  if (!report.ok)
    throw std::logic_error("generator produced an invalid instance: " + report.violations.front().message);
  return out;
}

}  // namespace

PDag generate_pdag(const GeneratorConfig& config) {
  check_config(config);
  return Generator(config).run();
}

double structure_workload_fraction(const DagIndex& dag) {
  double structured = 0.0;
  for (std::size_t s = 0; s < dag.structure_count(); ++s) {
    const auto& info = dag.structure(s);
    double sum = 0.0;
    for (const auto& b : info.branches) sum += b.volume;
    structured += sum / static_cast<double>(info.branches.size());
  }
  double whole = structured + dag.unconditional_volume();
  return whole > 0.0 ? structured / whole : 0.0;
}

double noar(const RtDistribution& test, const RtDistribution& baseline) {
  std::vector<double> grid;
  for (const DistributionPoint& p : test.points()) grid.push_back(p.response);
  for (const DistributionPoint& p : baseline.points()) grid.push_back(p.response);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double diff = 0.0, area = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    double width = grid[i + 1] - grid[i];
    double fb = baseline.cdf(grid[i]);
    diff += std::abs(test.cdf(grid[i]) - fb) * width;
    area += fb * width;
  }
  if (area > 0.0) return diff / area;
  if (diff == 0.0 && test == baseline && !baseline.empty()) return 0.0;
  throw ZeroAreaError("baseline distribution has zero area");
}

CoreSizer::CoreSizer(const DagIndex& dag, CoreMethod method, double deadline, std::uint64_t scenario_cap)
    : deadline_(deadline) {
  switch (method) {
    case CoreMethod::kAnalysis:
      *this = CoreSizer(dag, analyze(dag), deadline);
      return;
    case CoreMethod::kEnumeration: {
      OracleOptions options;
      options.scenario_cap = scenario_cap;
      options.record_ties = false;
      for (const ScenarioOutcome& o : enumerate_outcomes(dag, options))
        terms_.push_back({o.longest, o.volume - o.longest, o.probability});
      return;
    }
    case CoreMethod::kGraham: {
      std::vector<char> active(dag.node_count(), 1);
      std::vector<double> best(dag.node_count());
      double longest = detail::active_longest(dag, dag.topological_order(), active, best);
      double worst_volume = dag.unconditional_volume();
      for (std::size_t s = 0; s < dag.structure_count(); ++s) worst_volume += dag.structure(s).max_volume;
      terms_.push_back({longest, worst_volume - longest, 1.0});
      return;
    }
  }
}

CoreSizer::CoreSizer(const DagIndex& dag, const Analysis& analysis, double deadline) : deadline_(deadline) {
  (void)dag;
  const auto& entries = analysis.lambda_star.entries;
  for (std::size_t h = 0; h < entries.size(); ++h)
    terms_.push_back({entries[h].path.length, entries[h].interference, analysis.probabilities.probability.at(h)});
  ordered_ = true;
}

double CoreSizer::meet(int cores) const {
  std::vector<double> bounds;
  bounds.reserve(terms_.size());
  for (const Term& t : terms_) bounds.push_back(t.base + t.spread / cores);
  if (ordered_) detail::suffix_max(bounds);
  std::vector<DistributionPoint> points;
  points.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) points.push_back({bounds[i], terms_[i].mass});
  return meet_probability(RtDistribution(std::move(points)), deadline_);
}

int CoreSizer::min_cores(double acceptance) const {
  if (!(acceptance > 0.0 && acceptance <= 1.0)) throw ConfigError("acceptance ratio must lie in (0, 1]");
  const double needed = acceptance - 1e-12;
  if (meet(kMaxCores) < needed)
    throw InfeasibleError("no core count up to " + std::to_string(kMaxCores) + " meets the deadline with probability " +
                          std::to_string(acceptance));
  // Response bounds shrink as cores grow, so meet() is monotone in m.
  int lo = 1, hi = kMaxCores;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (meet(mid) >= needed)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

int min_cores(const DagIndex& dag, double acceptance, CoreMethod method, std::uint64_t scenario_cap) {
  return CoreSizer(dag, method, dag.pdag().deadline, scenario_cap).min_cores(acceptance);
}

bool dominates(const RtDistribution& upper, const RtDistribution& lower, double tolerance) {
  auto check = [&](double t) { return upper.exceedance(t) + tolerance >= lower.exceedance(t); };
  for (const DistributionPoint& p : upper.points())
    if (!check(p.response)) return false;
  for (const DistributionPoint& p : lower.points())
    if (!check(p.response)) return false;
  return true;
}

ComparisonReport compare(const DagIndex& dag, int cores, std::uint64_t scenario_cap) {
  ComparisonReport report;
  report.cores = cores;

  auto start = Clock::now();
  Analysis analysis = analyze(dag);
  report.analysis = distribution(dag, analysis, cores);
  report.analysis_seconds = seconds_since(start);

  OracleOptions options;
  options.scenario_cap = scenario_cap;
  options.record_ties = false;
  start = Clock::now();
  std::vector<ScenarioOutcome> outcomes = enumerate_outcomes(dag, options);
  report.oracle = outcome_distribution(outcomes, cores);
  report.oracle_seconds = seconds_since(start);

  report.noar = noar(report.analysis, report.oracle);
  report.dominance = dominates(report.analysis, report.oracle);

  const auto& entries = analysis.lambda_star.entries;
  const auto& probs = analysis.probabilities.probability;
  for (const LambdaStarEntry& e : entries) {
    PathDeviation d;
    d.path = e.path.nodes;
    d.length = e.path.length;
    for (std::size_t l = 0; l < entries.size(); ++l)
      if (detail::time_ge(entries[l].path.length, d.length)) d.analysis += probs[l];
    for (const ScenarioOutcome& o : outcomes)
      if (detail::time_ge(o.longest, d.length)) d.exact += o.probability;
    d.deviation = d.analysis - d.exact;
    report.deviations.push_back(std::move(d));
  }
  return report;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

namespace {

InstanceRecord run_instance(const GeneratorConfig& base, std::size_t config_index, std::size_t i, int cores,
                            std::uint64_t scenario_cap) {
  GeneratorConfig config = base;
  config.seed = base.seed + i;
  DagIndex dag(generate_pdag(config));

  InstanceRecord r;
  r.config = config_index;
  r.seed = config.seed;
  r.structures = config.structures;
  r.max_width = config.max_width;
  r.psr = config.psr;
  r.cores = cores;

  auto start = Clock::now();
  Analysis analysis = analyze(dag);
  RtDistribution dist = distribution(dag, analysis, cores);
  r.analysis_seconds = seconds_since(start);
  r.lambda_star_size = analysis.lambda_star.size();

  if (scenario_count(dag.pdag()) <= scenario_cap) {
    start = Clock::now();
    RtDistribution exact = enum_distribution(dag, cores, scenario_cap);
    r.oracle_seconds = seconds_since(start);
    r.noar = noar(dist, exact);
  }

  CoreSizer sizer(dag, analysis, dag.pdag().deadline);
  for (std::size_t a = 0; a < kAcceptanceLevels.size(); ++a) {
    try {
      r.cores_at[a] = sizer.min_cores(kAcceptanceLevels[a]);
    } catch (const InfeasibleError&) {
    }
  }
  return r;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

std::vector<InstanceRecord> bench_instances(const std::vector<GeneratorConfig>& configs, int cores,
                                            std::size_t per_config, unsigned jobs, std::uint64_t scenario_cap) {
  for (const GeneratorConfig& c : configs) check_config(c);
  const std::size_t total = configs.size() * per_config;
  std::vector<InstanceRecord> records(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < total;) {
      try {
        records[t] = run_instance(configs[t / per_config], t / per_config, t % per_config, cores, scenario_cap);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return records;
}

std::vector<SweepCell> summarize_sweep(const std::vector<GeneratorConfig>& configs,
                                       const std::vector<InstanceRecord>& records) {
  std::vector<SweepCell> cells;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    SweepCell cell;
    cell.config = configs[c];
    std::vector<double> analysis, oracle, noars;
    for (const InstanceRecord& r : records) {
      if (r.config != c) continue;
      ++cell.instances;
      analysis.push_back(r.analysis_seconds);
      if (r.oracle_seconds) oracle.push_back(*r.oracle_seconds);
      else cell.oracle_skipped = true;
      if (r.noar) noars.push_back(*r.noar);
    }
    if (!analysis.empty()) {
      cell.mean_analysis_seconds = mean(analysis);
      cell.median_analysis_seconds = percentile(analysis, 0.5);
    }
    if (!oracle.empty()) {
      cell.mean_oracle_seconds = mean(oracle);
      cell.median_oracle_seconds = percentile(oracle, 0.5);
    }
    if (!noars.empty()) {
      cell.mean_noar = mean(noars);
      cell.median_noar = percentile(noars, 0.5);
      cell.p90_noar = percentile(noars, 0.9);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<SweepCell> bench_sweep(const std::vector<GeneratorConfig>& configs, int cores, std::size_t per_config,
                                   unsigned jobs, std::uint64_t scenario_cap) {
  return summarize_sweep(configs, bench_instances(configs, cores, per_config, jobs, scenario_cap));
}

}  // namespace pdag
