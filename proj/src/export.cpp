#include "pdag/export.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <vector>

#include "pdag/errors.hpp"

namespace pdag {

std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

namespace {

void write_header(std::ostream& out, const RtDistribution& dist, int cores, const std::string& instance) {
  out << "# cores=" << cores << " total_mass=" << format_real(dist.total_mass()) << " instance=" << instance << '\n';
}

double read_real(std::string_view s, const std::string& where) {
  double x = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size())
    throw ParseError(ParseError::Kind::kType, where, "expected a number, got '" + std::string(s) + "'");
  return x;
}

}  // namespace

void write_distribution(std::ostream& out, const RtDistribution& dist, int cores, const std::string& instance) {
  write_header(out, dist, cores, instance);
  out << "response_time,probability_mass\n";
  for (const DistributionPoint& p : dist.points()) out << format_real(p.response) << ',' << format_real(p.mass) << '\n';
}

void write_exceedance(std::ostream& out, const RtDistribution& dist, int cores, const std::string& instance) {
  write_header(out, dist, cores, instance);
  out << "response_time,exceedance\n";
  for (const DistributionPoint& p : dist.points())
    out << format_real(p.response) << ',' << format_real(dist.exceedance(p.response)) << '\n';
}

DistributionFile parse_distribution(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && !(line[0] == '#' && !lines.empty())) lines.push_back(line);
  auto where = [](std::size_t i) { return "line " + std::to_string(i + 1); };
  if (lines.size() < 2 || !lines[0].starts_with("# "))
    throw ParseError(ParseError::Kind::kSyntax, where(0), "missing distribution header");

  DistributionFile file;
  bool seen_cores = false, seen_mass = false, seen_instance = false;
  std::istringstream header(lines[0].substr(2));
  for (std::string field; header >> field;) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError(ParseError::Kind::kSyntax, where(0), "bad header field '" + field + "'");
    std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "cores") {
      int cores = 0;
      auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), cores);
      if (ec != std::errc() || end != value.data() + value.size() || cores < 1)
        throw ParseError(ParseError::Kind::kType, where(0), "bad core count '" + value + "'");
      file.cores = cores;
      seen_cores = true;
    } else if (key == "total_mass") {
      file.total_mass = read_real(value, where(0));
      seen_mass = true;
    } else if (key == "instance") {
      file.instance = value;
      seen_instance = true;
    } else {
      throw ParseError(ParseError::Kind::kUnknownField, where(0), "unknown header field '" + key + "'");
    }
  }
  if (!seen_cores || !seen_mass || !seen_instance)
    throw ParseError(ParseError::Kind::kSyntax, where(0), "incomplete distribution header");
  if (lines[1] != "response_time,probability_mass")
    throw ParseError(ParseError::Kind::kSyntax, where(1), "expected column header response_time,probability_mass");

  std::vector<DistributionPoint> points;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    std::string_view row = lines[i];
    auto comma = row.find(',');
    if (comma == std::string_view::npos) throw ParseError(ParseError::Kind::kSyntax, where(i), "expected two columns");
    points.push_back({read_real(row.substr(0, comma), where(i)), read_real(row.substr(comma + 1), where(i))});
  }
  file.distribution = RtDistribution(std::move(points));
  return file;
}

}  // namespace pdag
