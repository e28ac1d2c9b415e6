#include <gtest/gtest.h>

#include <sstream>

#include "pdag/errors.hpp"
#include "pdag/export.hpp"

using namespace pdag;

TEST(FormatReal, ShortestRoundTrip) {
  EXPECT_EQ(format_real(10), "10");
  EXPECT_EQ(format_real(0.7), "0.7");
  EXPECT_EQ(format_real(0.1 + 0.2), "0.30000000000000004");
  for (double x : {1.0 / 3.0, 1e-300, 12345.678901234567, 2.5}) EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(Export, DistributionLayout) {
  std::ostringstream s;
  write_distribution(s, RtDistribution({{10, 0.7}, {13, 0.3}}), 2, "abc");
  EXPECT_EQ(s.str(), "# cores=2 total_mass=1 instance=abc\nresponse_time,probability_mass\n10,0.7\n13,0.3\n");
}

TEST(Export, ExceedanceLayout) {
  std::ostringstream s;
  write_exceedance(s, RtDistribution({{10, 0.5}, {13, 0.5}}), 4, "abc");
  EXPECT_EQ(s.str(), "# cores=4 total_mass=1 instance=abc\nresponse_time,exceedance\n10,1\n13,0.5\n");
}

TEST(Export, RoundTrip) {
  RtDistribution d({{1.0 / 3.0, 0.1}, {2.75, 0.2}, {1e6, 0.7000000000000001}});
  std::ostringstream s;
  write_distribution(s, d, 8, "0123456789abcdef");
  s << "# trailing comment\n";
  DistributionFile f = parse_distribution(s.str());
  EXPECT_EQ(f.cores, 8);
  EXPECT_EQ(f.instance, "0123456789abcdef");
  EXPECT_EQ(f.distribution, d);
  EXPECT_DOUBLE_EQ(f.total_mass, d.total_mass());
}

TEST(Export, ParseErrors) {
  EXPECT_THROW(parse_distribution(""), ParseError);
  EXPECT_THROW(parse_distribution("response_time,probability_mass\n1,1\n"), ParseError);
  EXPECT_THROW(parse_distribution("# cores=1 total_mass=1 instance=x\nresponse_time,probability_mass\n1;1\n"),
               ParseError);
  EXPECT_THROW(parse_distribution("# cores=1 total_mass=1 instance=x\nwrong,header\n"), ParseError);
}
