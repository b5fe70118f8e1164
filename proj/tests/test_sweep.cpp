#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fcsma/sweep.hpp"

using fcsma::parse_sweep;
using fcsma::replication_seed;
using fcsma::run_sweep;
using fcsma::sweep_csv_header;
using fcsma::SweepSpec;

namespace {

const char* kSweepText = R"(
n = 4
arrival.lambda = 0.02
channel.p = 0.9
drop.rho = 0.2
drop.kind = constant
scheduler = fcsma-continuous
horizon = 2000
seed = 11
replications = 2
sweep.axis = arrival.lambda
sweep.values = 0.02, 0.01
sweep.output = out.csv
)";

std::vector<std::string> csv_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

double first_field(const std::string& line) { return std::stod(line); }

double field_at(const std::string& line, int index) {
  std::istringstream in(line);
  std::string cell;
  for (int i = 0; i <= index; ++i) std::getline(in, cell, ',');
  return std::stod(cell);
}

}  // namespace

TEST_CASE("sweep files parse into spec plus scenario") {
  const auto result = parse_sweep(kSweepText);
  REQUIRE(result.ok());
  CHECK(result.spec->axis == "arrival.lambda");
  CHECK(result.spec->values == std::vector<double>{0.02, 0.01});
  CHECK(result.spec->output_path == "out.csv");
  CHECK(result.spec->base.links == 4);
  CHECK(result.spec->base.replications == 2);
}

TEST_CASE("sweep parsing reports axis problems") {
  auto result = parse_sweep("n = 1\nsweep.values = 0.1\n");
  CHECK_FALSE(result.ok());
  bool saw_axis = false;
  for (const auto& e : result.errors) saw_axis |= e.field == "sweep.axis";
  CHECK(saw_axis);

  result = parse_sweep(
      "n = 1\narrival.lambda = 0.1\nchannel.p = 0.9\ndrop.rho = 0.2\n"
      "scheduler = max-weight\nhorizon = 10\nseed = 1\n"
      "sweep.axis = weight_function\nsweep.values = 1\n");
  CHECK_FALSE(result.ok());

  result = parse_sweep(
      "n = 1\narrival.lambda = 0.1\nchannel.p = 0.9\ndrop.rho = 0.2\n"
      "scheduler = max-weight\nhorizon = 10\nseed = 1\n"
      "sweep.axis = arrival.lambda\nsweep.values = 0.1, oops\n");
  CHECK_FALSE(result.ok());
}

TEST_CASE("empty value lists and zero replications yield a header-only CSV") {
  auto parsed = parse_sweep(kSweepText);
  REQUIRE(parsed.ok());

  auto spec = *parsed.spec;
  spec.values.clear();
  CHECK(run_sweep(spec) == sweep_csv_header(4));

  spec = *parsed.spec;
  spec.base.replications = 0;
  CHECK(run_sweep(spec) == sweep_csv_header(4));
}

TEST_CASE("rows are ordered by axis value then replication") {
  const auto parsed = parse_sweep(kSweepText);
  REQUIRE(parsed.ok());
  const auto csv = run_sweep(*parsed.spec);
  const auto lines = csv_lines(csv);
  REQUIRE(lines.size() == 5);  // header + 2 values x 2 replications
  CHECK(lines[0] == "axis_value,replication,mean_total_x,final_total_x,drift_slope,"
                    "drop_frac_0,drop_frac_1,drop_frac_2,drop_frac_3,stable,status");
  CHECK(first_field(lines[1]) == 0.01);
  CHECK(first_field(lines[2]) == 0.01);
  CHECK(first_field(lines[3]) == 0.02);
  CHECK(first_field(lines[4]) == 0.02);
  CHECK(field_at(lines[1], 1) == 0.0);
  CHECK(field_at(lines[2], 1) == 1.0);
}

TEST_CASE("sweep output is identical across repeats and worker counts") {
  const auto parsed = parse_sweep(kSweepText);
  REQUIRE(parsed.ok());
  const auto serial = run_sweep(*parsed.spec, 1);
  CHECK(run_sweep(*parsed.spec, 1) == serial);
  CHECK(run_sweep(*parsed.spec, 4) == serial);
  CHECK(run_sweep(*parsed.spec, 64) == serial);
}

TEST_CASE("adding axis values never changes existing rows") {
  auto parsed = parse_sweep(kSweepText);
  REQUIRE(parsed.ok());

  auto small = *parsed.spec;
  auto large = *parsed.spec;
  large.values.push_back(0.015);

  const auto small_lines = csv_lines(run_sweep(small));
  const auto large_lines = csv_lines(run_sweep(large, 3));
  for (std::size_t i = 1; i < small_lines.size(); ++i) {
    CHECK(std::find(large_lines.begin(), large_lines.end(), small_lines[i]) !=
          large_lines.end());
  }
}

TEST_CASE("replication seeds separate cells without touching the base") {
  CHECK(replication_seed(42, 0, 0.1) == replication_seed(42, 0, 0.1));
  CHECK(replication_seed(42, 0, 0.1) != replication_seed(42, 1, 0.1));
  CHECK(replication_seed(42, 0, 0.1) != replication_seed(42, 0, 0.2));
  CHECK(replication_seed(42, 0, 0.1) != replication_seed(43, 0, 0.1));
  // equal printed values share a seed regardless of how they were produced
  CHECK(replication_seed(7, 2, 0.25) == replication_seed(7, 2, 0.125 + 0.125));
}

TEST_CASE("a failing cell becomes an error row and the sweep continues") {
  auto parsed = parse_sweep(kSweepText);
  REQUIRE(parsed.ok());
  auto spec = *parsed.spec;
  spec.values = {0.02, 1.5};  // bernoulli arrivals cannot run at 1.5
  spec.base.replications = 1;

  const auto lines = csv_lines(run_sweep(spec));
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].find(",ok") != std::string::npos);
  CHECK(lines[2].rfind("1.5,0,nan,nan,nan", 0) == 0);
  CHECK(lines[2].find(",error: ") != std::string::npos);
  CHECK(lines[2].find("error: ") > lines[2].find(",false,"));
}

TEST_CASE("max-weight rate sweep flips from stable to unstable across the boundary") {
  const char* text = R"(
n = 10
arrival.lambda = 0.02
channel.p = 0.9
drop.rho = 0.2
drop.kind = constant
scheduler = max-weight
horizon = 100000
seed = 4242
replications = 1
sweep.axis = arrival.lambda
sweep.values = 0.015, 0.045
)";
  const auto parsed = parse_sweep(text);
  REQUIRE(parsed.ok());
  const auto lines = csv_lines(run_sweep(*parsed.spec, 2));
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].find(",true,ok") != std::string::npos);
  CHECK(lines[2].find(",false,ok") != std::string::npos);
}

TEST_CASE("more qcsma mini-slots only helps the backlog") {
  const char* text = R"(
n = 10
arrival.lambda = 0.015
channel.p = 0.9
drop.rho = 0.2
drop.kind = constant
scheduler = qcsma
minislots = 1
horizon = 20000
seed = 31415
replications = 1
sweep.axis = minislots
sweep.values = 1, 8, 64
)";
  const auto parsed = parse_sweep(text);
  REQUIRE(parsed.ok());
  const auto lines = csv_lines(run_sweep(*parsed.spec, 3));
  REQUIRE(lines.size() == 4);
  const double mean_m1 = field_at(lines[1], 2);
  const double mean_m8 = field_at(lines[2], 2);
  const double mean_m64 = field_at(lines[3], 2);
  CHECK(mean_m1 > mean_m8);
  CHECK(mean_m8 >= mean_m64);
}
