#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "pdag/response.hpp"

namespace pdag {

/// Shortest text that reads back to the same double.
std::string format_real(double x);

/// Header line plus `response_time,probability_mass` rows:
///
///   # cores=2 total_mass=1 instance=9f0c...
///   response_time,probability_mass
///   10,0.7
void write_distribution(std::ostream& out, const RtDistribution& dist, int cores, const std::string& instance);

/// Same header, then `response_time,exceedance` rows, one per support point.
void write_exceedance(std::ostream& out, const RtDistribution& dist, int cores, const std::string& instance);

struct DistributionFile {
  int cores = 1;
  double total_mass = 0.0;
  std::string instance;
  RtDistribution distribution;
};

/// Reads the output of write_distribution. Comment lines after the header
/// are ignored. Throws ParseError.
DistributionFile parse_distribution(std::string_view text);

}  // namespace pdag
