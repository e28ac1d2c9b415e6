#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "pdag/analysis.hpp"
#include "pdag/cli.hpp"
#include "pdag/errors.hpp"
#include "pdag/model.hpp"
#include "pdag/oracle.hpp"
#include "pdag/workbench.hpp"

namespace py = pybind11;
using namespace pdag;

namespace {

using Points = std::vector<std::pair<double, double>>;

Points to_points(const RtDistribution& d) {
  Points out;
  for (const DistributionPoint& p : d.points()) out.emplace_back(p.response, p.mass);
  return out;
}

RtDistribution from_points(const Points& points) {
  std::vector<DistributionPoint> v;
  for (const auto& [r, m] : points) v.push_back({r, m});
  return RtDistribution(std::move(v));
}

DagIndex index_of(const std::string& text) { return DagIndex(parse_pdag(text)); }

py::list branch_list(const std::vector<BranchRef>& branches) {
  py::list out;
  for (const BranchRef& b : branches) out.append(py::make_tuple(b.structure, b.branch));
  return out;
}

std::optional<std::string> clamp_name(const ProbabilityAssignment& probs, std::size_t h) {
  for (const ClampEvent& e : probs.clamps) {
    if (e.index != h) continue;
    switch (e.rule) {
      case ClampRule::kLower: return "lower";
      case ClampRule::kUpper: return "upper";
      case ClampRule::kTerminated: return "terminated";
    }
  }
  return std::nullopt;
}

py::dict py_validate(const std::string& text) {
  ValidationReport report = validate(parse_pdag(text));
  py::list violations;
  for (const Violation& v : report.violations)
    violations.append(py::make_tuple(std::string(rule_name(v.rule)), v.message, v.ids));
  py::dict out;
  out["ok"] = report.ok;
  out["violations"] = violations;
  return out;
}

py::dict py_analyze(const std::string& text, int cores) {
  DagIndex dag = index_of(text);
  Analysis a = analyze(dag);
  py::list paths;
  auto entries = response_entries(dag, a.lambda_star, a.probabilities, cores);
  for (std::size_t h = 0; h < entries.size(); ++h) {
    py::dict p;
    p["nodes"] = entries[h].path.nodes;
    p["length"] = entries[h].path.length;
    p["branches"] = branch_list(entries[h].path.branches);
    p["probability"] = entries[h].probability;
    p["interference"] = entries[h].interference;
    p["response"] = entries[h].response;
    p["placed_at"] = entries[h].placed_at;
    p["clamp"] = clamp_name(a.probabilities, h);
    paths.append(p);
  }
  py::dict out;
  out["delta"] = a.lambda_star.delta;
  out["paths"] = paths;
  out["distribution"] = to_points(distribution(dag, a, cores));
  return out;
}

py::dict py_compare(const std::string& text, int cores, std::uint64_t cap) {
  DagIndex dag = index_of(text);
  ComparisonReport r = compare(dag, cores, cap);
  py::list deviations;
  for (const PathDeviation& d : r.deviations) {
    py::dict row;
    row["nodes"] = d.path;
    row["length"] = d.length;
    row["analysis"] = d.analysis;
    row["exact"] = d.exact;
    row["deviation"] = d.deviation;
    deviations.append(row);
  }
  py::dict out;
  out["noar"] = r.noar;
  out["dominance"] = r.dominance;
  out["deviations"] = deviations;
  out["analysis"] = to_points(r.analysis);
  out["oracle"] = to_points(r.oracle);
  out["analysis_seconds"] = r.analysis_seconds;
  out["oracle_seconds"] = r.oracle_seconds;
  return out;
}

int py_min_cores(const std::string& text, double acceptance, const std::string& method,
                 std::optional<double> deadline, std::uint64_t cap) {
  DagIndex dag = index_of(text);
  CoreMethod m;
  if (method == "analysis")
    m = CoreMethod::kAnalysis;
  else if (method == "enumeration")
    m = CoreMethod::kEnumeration;
  else if (method == "graham")
    m = CoreMethod::kGraham;
  else
    throw ConfigError("unknown method '" + method + "'");
  return CoreSizer(dag, m, deadline.value_or(dag.pdag().deadline), cap).min_cores(acceptance);
}

std::string py_generate(std::uint64_t seed, int structures, int max_width, double psr, int branches) {
  GeneratorConfig c;
  c.seed = seed;
  c.structures = structures;
  c.max_width = max_width;
  c.psr = psr;
  c.branches = branches;
  return serialize_pdag(generate_pdag(c));
}

py::tuple py_run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = run_cli(args, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the p-DAG response-time analysis library";

  // Translators run newest first, so the base class goes in first.
  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ModelError>(m, "ModelError", error.ptr());
  py::register_exception<ScenarioCapExceeded>(m, "CapExceededError", error.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());
  py::register_exception<ZeroAreaError>(m, "ZeroAreaError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  m.def("validate", &py_validate, py::arg("text"),
        "Parse an instance and check the model rules. Returns {'ok', 'violations'}.");
  m.def("analyze", &py_analyze, py::arg("text"), py::arg("cores") = 1,
        "Longest-path set with probabilities, interference and response bounds, plus the distribution.");
  m.def(
      "enumerate_distribution",
      [](const std::string& text, int cores, std::uint64_t cap) {
        return to_points(enum_distribution(index_of(text), cores, cap));
      },
      py::arg("text"), py::arg("cores") = 1, py::arg("scenario_cap") = kDefaultScenarioCap,
      "Exact distribution by scenario enumeration as (response, mass) pairs.");
  m.def("compare", &py_compare, py::arg("text"), py::arg("cores"), py::arg("scenario_cap") = kDefaultScenarioCap);
  m.def("min_cores", &py_min_cores, py::arg("text"), py::arg("acceptance"), py::arg("method") = "analysis",
        py::arg("deadline") = py::none(), py::arg("scenario_cap") = kDefaultScenarioCap);
  m.def("generate", &py_generate, py::arg("seed"), py::arg("structures") = 3, py::arg("max_width") = 6,
        py::arg("psr") = 0.4, py::arg("branches") = 3, "Random instance as canonical JSON text.");
  m.def(
      "noar", [](const Points& test, const Points& baseline) { return noar(from_points(test), from_points(baseline)); },
      py::arg("test"), py::arg("baseline"));
  m.def("run_cli", &py_run_cli, py::arg("args"), "Run a command-line invocation; returns (exit code, stdout, stderr).");
}
