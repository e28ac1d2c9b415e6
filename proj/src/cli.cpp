#include "pdag/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "pdag/analysis.hpp"
#include "pdag/errors.hpp"
#include "pdag/export.hpp"
#include "pdag/model.hpp"
#include "pdag/oracle.hpp"
#include "pdag/workbench.hpp"

namespace pdag {

namespace {

class InputError : public Error {
 public:
  using Error::Error;
};

enum class Format { kText, kRecords };
enum class Emit { kDist, kExceedance, kPaths };

const std::map<std::string, Format> kFormats{{"text", Format::kText}, {"records", Format::kRecords}};
const std::map<std::string, CoreMethod> kMethods{
    {"analysis", CoreMethod::kAnalysis}, {"enumeration", CoreMethod::kEnumeration}, {"graham", CoreMethod::kGraham}};

PDag load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_pdag(text.str());
}

std::string join_path(const std::vector<NodeId>& nodes, char sep) {
  std::string s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(nodes[i]);
  }
  return s;
}

std::string join_branches(const std::vector<BranchRef>& branches) {
  if (branches.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(branches[i].structure) + ":" + std::to_string(branches[i].branch);
  }
  return s;
}

std::string clamp_label(const ProbabilityAssignment& probs, std::size_t h) {
  for (const ClampEvent& e : probs.clamps) {
    if (e.index != h) continue;
    switch (e.rule) {
      case ClampRule::kLower: return "lower";
      case ClampRule::kUpper: return "upper";
      case ClampRule::kTerminated: return "terminated";
    }
  }
  return "-";
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

template <class T>
std::string or_na(const std::optional<T>& v) {
  if (!v) return "NA";
  if constexpr (std::is_floating_point_v<T>)
    return format_real(*v);
  else
    return std::to_string(*v);
}

// Space-padded table for text output; records output uses plain CSV.
void write_table(std::ostream& out, Format format, const std::vector<std::vector<std::string>>& rows) {
  if (format == Format::kRecords) {
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

struct Common {
  std::string file;
  int cores = 1;
  std::optional<double> deadline;
  std::string emit = "dist";
  std::string format = "text";
  std::uint64_t scenario_cap = kDefaultScenarioCap;
};

void emit_distribution(std::ostream& out, const std::string& emit, const RtDistribution& dist, int cores,
                       const std::string& hash) {
  if (emit == "exceedance")
    write_exceedance(out, dist, cores, hash);
  else
    write_distribution(out, dist, cores, hash);
}

void emit_meet(std::ostream& out, const RtDistribution& dist, std::optional<double> deadline) {
  if (deadline)
    out << "# deadline=" << format_real(*deadline) << " meet_probability=" << format_real(meet_probability(dist, *deadline))
        << '\n';
}

int cmd_validate(const Common& o, std::ostream& out) {
  PDag pdag = load(o.file);
  ValidationReport report = validate(pdag);
  if (kFormats.at(o.format) == Format::kRecords) {
    out << "rule,ids,message\n";
    for (const Violation& v : report.violations) {
      std::string ids;
      for (std::size_t i = 0; i < v.ids.size(); ++i) ids += (i ? " " : "") + std::to_string(v.ids[i]);
      out << rule_name(v.rule) << ',' << ids << ',' << csv_quote(v.message) << '\n';
    }
  } else {
    out << (report.ok ? "ok" : "invalid") << '\n';
    for (const Violation& v : report.violations) out << "  " << rule_name(v.rule) << ": " << v.message << '\n';
  }
  return report.ok ? kExitOk : kExitInput;
}

int cmd_analyze(const Common& o, std::ostream& out) {
  DagIndex dag(load(o.file));
  Analysis analysis = analyze(dag);
  RtDistribution dist = distribution(dag, analysis, o.cores);
  std::string hash = instance_hash(dag.pdag());
  if (o.emit != "paths") {
    emit_distribution(out, o.emit, dist, o.cores, hash);
    emit_meet(out, dist, o.deadline);
    return kExitOk;
  }
  out << "# cores=" << o.cores << " delta=" << format_real(analysis.lambda_star.delta)
      << " candidates=" << analysis.lambda_star.candidate_count << " instance=" << hash << '\n';
  std::vector<std::vector<std::string>> rows{
      {"rank", "length", "probability", "interference", "response", "placed_at", "clamp", "branches", "path"}};
  auto entries = response_entries(dag, analysis.lambda_star, analysis.probabilities, o.cores);
  for (std::size_t h = 0; h < entries.size(); ++h) {
    const ResponseEntry& e = entries[h];
    rows.push_back({std::to_string(h + 1), format_real(e.path.length), format_real(e.probability),
                    format_real(e.interference), format_real(e.response), format_real(e.placed_at),
                    clamp_label(analysis.probabilities, h),
                    join_branches(e.path.branches), join_path(e.path.nodes, '-')});
  }
  write_table(out, kFormats.at(o.format), rows);
  emit_meet(out, dist, o.deadline);
  return kExitOk;
}

int cmd_enumerate(const Common& o, std::ostream& out) {
  DagIndex dag(load(o.file));
  RtDistribution dist = enum_distribution(dag, o.cores, o.scenario_cap);
  emit_distribution(out, o.emit, dist, o.cores, instance_hash(dag.pdag()));
  emit_meet(out, dist, o.deadline);
  return kExitOk;
}

int cmd_compare(const Common& o, bool timing, std::ostream& out) {
  DagIndex dag(load(o.file));
  ComparisonReport r = compare(dag, o.cores, o.scenario_cap);
  out << "# cores=" << r.cores << " noar=" << format_real(r.noar) << " dominance=" << (r.dominance ? "yes" : "no")
      << " instance=" << instance_hash(dag.pdag()) << '\n';
  if (timing)
    out << "# analysis_seconds=" << format_real(r.analysis_seconds)
        << " oracle_seconds=" << format_real(r.oracle_seconds) << '\n';
  std::vector<std::vector<std::string>> rows{{"length", "analysis", "exact", "deviation", "path"}};
  for (const PathDeviation& d : r.deviations)
    rows.push_back({format_real(d.length), format_real(d.analysis), format_real(d.exact), format_real(d.deviation),
                    join_path(d.path, '-')});
  write_table(out, kFormats.at(o.format), rows);
  return kExitOk;
}

int cmd_cores(const Common& o, const std::vector<double>& acceptance, const std::string& method, std::ostream& out,
              std::ostream& err) {
  DagIndex dag(load(o.file));
  double deadline = o.deadline.value_or(dag.pdag().deadline);
  CoreSizer sizer(dag, kMethods.at(method), deadline, o.scenario_cap);
  int code = kExitOk;
  std::vector<std::vector<std::string>> rows{{"method", "acceptance", "deadline", "cores"}};
  for (double a : acceptance) {
    std::string cores;
    try {
      cores = std::to_string(sizer.min_cores(a));
    } catch (const InfeasibleError& e) {
      err << "error: " << e.what() << '\n';
      cores = "NA";
      code = kExitInfeasible;
    }
    rows.push_back({method, format_real(a), format_real(deadline), cores});
  }
  write_table(out, kFormats.at(o.format), rows);
  return code;
}

struct GeneratorFlags {
  std::uint64_t seed = 0;
  std::vector<int> structures{GeneratorConfig{}.structures};
  std::vector<int> max_width{GeneratorConfig{}.max_width};
  std::vector<double> psr{GeneratorConfig{}.psr};
  int branches = GeneratorConfig{}.branches;
  int min_layers = GeneratorConfig{}.min_layers;
  int max_layers = GeneratorConfig{}.max_layers;
  double edge_probability = GeneratorConfig{}.edge_probability;
  double utilization = GeneratorConfig{}.utilization;

  // Cartesian product of the list-valued flags, |Theta| varying slowest.
  std::vector<GeneratorConfig> configs() const {
    std::vector<GeneratorConfig> out;
    for (int s : structures)
      for (int p : max_width)
        for (double r : psr) {
          GeneratorConfig c;
          c.seed = seed;
          c.structures = s;
          c.max_width = p;
          c.psr = r;
          c.branches = branches;
          c.min_layers = min_layers;
          c.max_layers = max_layers;
          c.edge_probability = edge_probability;
          c.utilization = utilization;
          out.push_back(c);
        }
    return out;
  }
};

void add_generator_flags(CLI::App* app, GeneratorFlags& g, bool lists) {
  app->add_option("--seed", g.seed, "Base seed; instance i uses seed + i")->required();
  if (lists) {
    app->add_option("--structures", g.structures, "Structure counts |Theta|")->delimiter(',');
    app->add_option("--max-width", g.max_width, "Maximum nodes per layer p")->delimiter(',');
    app->add_option("--psr", g.psr, "Share of workload inside structures")->delimiter(',');
  } else {
    app->add_option("--structures", g.structures[0], "Structure count |Theta|");
    app->add_option("--max-width", g.max_width[0], "Maximum nodes per layer p");
    app->add_option("--psr", g.psr[0], "Share of workload inside structures");
  }
  app->add_option("--branches", g.branches, "Branches per structure");
  app->add_option("--min-layers", g.min_layers, "Minimum layer count");
  app->add_option("--max-layers", g.max_layers, "Maximum layer count");
  app->add_option("--edge-probability", g.edge_probability, "Probability of each forward edge");
  app->add_option("--utilization", g.utilization, "Total workload over period");
}

int cmd_generate(const GeneratorFlags& g, std::size_t count, const std::string& dir, std::ostream& out) {
  GeneratorConfig base = g.configs().front();
  if (count > 1 && dir.empty()) throw InputError("--count above 1 needs --output-dir");
  for (std::size_t i = 0; i < count; ++i) {
    GeneratorConfig c = base;
    c.seed = base.seed + i;
    std::string text = serialize_pdag(generate_pdag(c));
    if (dir.empty()) {
      out << text;
      continue;
    }
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / ("pdag_" + std::to_string(c.seed) + ".json");
    std::ofstream file(path, std::ios::binary);
    if (!(file << text)) throw InputError("cannot write " + path.string());
    out << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_bench(const GeneratorFlags& g, const Common& o, std::size_t instances, unsigned jobs, bool summary,
              std::ostream& out) {
  std::vector<GeneratorConfig> configs = g.configs();
  std::vector<InstanceRecord> records = bench_instances(configs, o.cores, instances, jobs, o.scenario_cap);
  Format format = kFormats.at(o.format);
  std::vector<std::vector<std::string>> rows;
  if (summary) {
    rows.push_back({"structures", "p", "psr", "m", "instances", "mean_t_analysis", "median_t_analysis",
                    "mean_t_oracle", "median_t_oracle", "oracle", "mean_noar", "median_noar", "p90_noar"});
    for (const SweepCell& c : summarize_sweep(configs, records))
      rows.push_back({std::to_string(c.config.structures), std::to_string(c.config.max_width),
                      format_real(c.config.psr), std::to_string(o.cores), std::to_string(c.instances),
                      format_real(c.mean_analysis_seconds), format_real(c.median_analysis_seconds),
                      or_na(c.mean_oracle_seconds), or_na(c.median_oracle_seconds),
                      c.oracle_skipped ? "skipped" : "ok", or_na(c.mean_noar), or_na(c.median_noar),
                      or_na(c.p90_noar)});
  } else {
    rows.push_back({"seed", "structures", "p", "psr", "m", "noar", "t_analysis", "t_oracle", "cores@0.7",
                    "cores@0.8", "cores@0.9", "cores@1.0"});
    for (const InstanceRecord& r : records) {
      std::vector<std::string> row{std::to_string(r.seed), std::to_string(r.structures), std::to_string(r.max_width),
                                   format_real(r.psr), std::to_string(r.cores), or_na(r.noar),
                                   format_real(r.analysis_seconds), or_na(r.oracle_seconds)};
      for (const auto& c : r.cores_at) row.push_back(or_na(c));
      rows.push_back(std::move(row));
    }
  }
  write_table(out, format, rows);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic response-time analysis for p-DAG tasks", "pdag"};
  app.require_subcommand(1);

  Common o;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "Instance file")->required(); };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "records"}));
  };
  auto add_cores = [&](CLI::App* sub) {
    sub->add_option("--cores,-m", o.cores, "Core count")->check(CLI::Range(1, kMaxCores));
  };
  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--scenario-cap", o.scenario_cap, "Maximum number of enumerated scenarios");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check an instance against the model rules");
  add_file(validate_cmd);
  add_format(validate_cmd);

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Response-time distribution without enumeration");
  add_file(analyze_cmd);
  add_cores(analyze_cmd);
  add_format(analyze_cmd);
  analyze_cmd->add_option("--deadline", o.deadline, "Report the probability of meeting this deadline");
  analyze_cmd->add_option("--emit", o.emit, "What to print")->check(CLI::IsMember({"dist", "exceedance", "paths"}));

  CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "Exact distribution by scenario enumeration");
  add_file(enumerate_cmd);
  add_cores(enumerate_cmd);
  add_cap(enumerate_cmd);
  enumerate_cmd->add_option("--deadline", o.deadline, "Report the probability of meeting this deadline");
  enumerate_cmd->add_option("--emit", o.emit, "What to print")->check(CLI::IsMember({"dist", "exceedance"}));

  bool timing = false;
  CLI::App* compare_cmd = app.add_subcommand("compare", "Analysis against enumeration on one instance");
  add_file(compare_cmd);
  add_cores(compare_cmd);
  add_cap(compare_cmd);
  add_format(compare_cmd);
  compare_cmd->add_flag("--timing", timing, "Also print wall-clock times");

  std::vector<double> acceptance{1.0};
  std::string method = "analysis";
  CLI::App* cores_cmd = app.add_subcommand("cores", "Minimum core count for an acceptance ratio");
  add_file(cores_cmd);
  add_cap(cores_cmd);
  add_format(cores_cmd);
  cores_cmd->add_option("--acceptance", acceptance, "Required probability of meeting the deadline")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  cores_cmd->add_option("--method", method, "Distribution used for sizing")
      ->check(CLI::IsMember({"analysis", "enumeration", "graham"}));
  cores_cmd->add_option("--deadline", o.deadline, "Deadline override");

  GeneratorFlags gen;
  std::size_t count = 1;
  std::string output_dir;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Random layered p-DAG instances");
  add_generator_flags(generate_cmd, gen, false);
  generate_cmd->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--output-dir", output_dir, "Write one file per instance here");

  GeneratorFlags bench_gen;
  std::size_t instances = 20;
  unsigned jobs = 1;
  bool summary = false;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Sweep generated instances through both pipelines");
  add_generator_flags(bench_cmd, bench_gen, true);
  add_cores(bench_cmd);
  add_cap(bench_cmd);
  add_format(bench_cmd);
  bench_cmd->add_option("--instances", instances, "Instances per configuration");
  bench_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--summary", summary, "One row per configuration instead of per instance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*analyze_cmd) return cmd_analyze(o, out);
    if (*enumerate_cmd) return cmd_enumerate(o, out);
    if (*compare_cmd) return cmd_compare(o, timing, out);
    if (*cores_cmd) return cmd_cores(o, acceptance, method, out, err);
    if (*generate_cmd) return cmd_generate(gen, count, output_dir, out);
    if (*bench_cmd) return cmd_bench(bench_gen, o, instances, jobs, summary, out);
  } catch (const ScenarioCapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapExceeded;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ZeroAreaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace pdag
