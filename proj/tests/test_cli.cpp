#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <filesystem>
#include <string>
#include <vector>

#include "nibsim/cli.hpp"
#include "test_util.hpp"

using namespace nibsim;
using testutil::lines_of;
using testutil::run;
using testutil::slurp;
using testutil::split;
using testutil::spit;

namespace {

const std::string kBin = NIBSIM_BIN;
const std::string kReference = NIBSIM_REFERENCE;

std::string plan_cmd(const std::string& scenario, const std::string& strategy,
                     const std::string& prefix, int threads = 1) {
  return kBin + " plan --scenario " + scenario + " --strategy " + strategy +
         " --out " + prefix + " --threads " + std::to_string(threads);
}

/// First data-row field of a one-row CSV (objective_bits / total_bits).
std::string first_field(const std::string& csv_path, int column = 0) {
  auto rows = lines_of(slurp(csv_path));
  REQUIRE(rows.size() >= 2);
  auto fields = split(rows[1], ',');
  REQUIRE(static_cast<int>(fields.size()) > column);
  return fields[column];
}

}  // namespace

TEST_CASE("parse_strategy accepts the three run modes") {
  CHECK(parse_strategy("rate_max") == Strategy::RateMax);
  CHECK(parse_strategy("shortest") == Strategy::Shortest);
  CHECK(parse_strategy("rate_max_cellular_only") ==
        Strategy::RateMaxCellularOnly);
  CHECK_THROWS_AS(parse_strategy("fastest"), std::invalid_argument);
  CHECK_THROWS_AS(parse_strategy(""), std::invalid_argument);
}

TEST_CASE("parse_offsets expands inclusive start:stop:step ranges") {
  auto offs = parse_offsets("30:60:5");
  REQUIRE(offs.size() == 7);
  CHECK(offs.front() == 30.0);
  CHECK(offs.back() == 60.0);
  CHECK(parse_offsets("0:0:1") == std::vector<double>{0.0});
  auto fine = parse_offsets("5:6:0.5");
  REQUIRE(fine.size() == 3);
  CHECK(fine[1] == 5.5);
  auto negative = parse_offsets("-10:-5:5");
  REQUIRE(negative.size() == 2);
  CHECK(negative[0] == -10.0);

  for (const char* bad : {"", "abc", "1:2", "30:60", "2:1:1", "1:2:0",
                          "1:2:-1", "1:x:1", "1:2:3:4", "0:1000000:0.001"}) {
    CHECK_THROWS_AS(parse_offsets(bad), std::invalid_argument);
  }
}

TEST_CASE("digest64 matches FNV-1a reference vectors") {
  CHECK(digest64("") == 0xcbf29ce484222325ULL);
  CHECK(digest64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(digest64("hello") == 0xa430d84680aabd0bULL);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, -3.5, 678394148498.91858, 1e-300, 0.1}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("path CSV round-trips a trajectory") {
  Trajectory traj;
  traj.samples = {{0.0, {10.5, 10.5}}, {240.0, {11.3, 10.1}}, {480.0, {12.5, 9.5}}};
  Trajectory back = parse_path_csv(path_csv(traj));
  CHECK(back == traj);

  CHECK_THROWS_AS(parse_path_csv("bogus\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path_csv("t_s,x_km,y_km\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path_csv("t_s,x_km,y_km\n0,1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_path_csv("t_s,x_km,y_km\n0,1,zap\n"),
                  std::invalid_argument);
}

TEST_CASE("plan writes the three CSVs and reports success") {
  testutil::TempDir tmp("nibsim-cli-plan");
  std::string prefix = tmp.path("run");
  std::string report = tmp.path("report.txt");
  int status = std::system(
      (plan_cmd(kReference, "rate_max", prefix) + " > " + report).c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == kExitOk);

  std::string path_text = slurp(prefix + ".path.csv");
  std::string timeline_text = slurp(prefix + ".timeline.csv");
  std::string summary_text = slurp(prefix + ".summary.csv");
  CHECK(lines_of(path_text).at(0) == "t_s,x_km,y_km");
  CHECK(lines_of(path_text).size() == 32);  // header + 31 samples
  CHECK(lines_of(timeline_text).at(0) ==
        "t_s,chosen_network,rate_bps_net0,rate_bps_net1,rate_bps_net2,"
        "rate_bps_net3,step_bits");
  CHECK(lines_of(timeline_text).size() == 31);  // header + 30 steps
  CHECK(lines_of(summary_text).at(0) ==
        "objective_bits,bits_net0,bits_net1,bits_net2,bits_net3,effort_proxy");

  CHECK(std::stod(first_field(prefix + ".summary.csv")) > 0.0);

  std::string line = slurp(report);
  CHECK(line.find("command=plan") != std::string::npos);
  CHECK(line.find("scenario_digest=") != std::string::npos);
  CHECK(line.find("total_bits=") != std::string::npos);
}

TEST_CASE("all strategies plan the reference scenario") {
  testutil::TempDir tmp("nibsim-cli-strategies");
  CHECK(run(plan_cmd(kReference, "rate_max", tmp.path("a"))) == kExitOk);
  CHECK(run(plan_cmd(kReference, "shortest", tmp.path("b"))) == kExitOk);
  CHECK(run(plan_cmd(kReference, "rate_max_cellular_only", tmp.path("c"))) ==
        kExitOk);
  double best = std::stod(first_field(tmp.path("a") + ".summary.csv"));
  double uniform = std::stod(first_field(tmp.path("b") + ".summary.csv"));
  double cells = std::stod(first_field(tmp.path("c") + ".summary.csv"));
  CHECK(best >= uniform);
  CHECK(best > cells);
}

TEST_CASE("eval reproduces the planner timeline byte for byte") {
  testutil::TempDir tmp("nibsim-cli-eval");
  std::string plan_prefix = tmp.path("plan");
  std::string eval_prefix = tmp.path("eval");
  REQUIRE(run(plan_cmd(kReference, "rate_max", plan_prefix)) == kExitOk);
  REQUIRE(run(kBin + " eval --scenario " + kReference + " --path " +
              plan_prefix + ".path.csv --out " + eval_prefix) == kExitOk);
  CHECK(slurp(eval_prefix + ".timeline.csv") ==
        slurp(plan_prefix + ".timeline.csv"));
  CHECK(slurp(eval_prefix + ".summary.csv") ==
        slurp(plan_prefix + ".summary.csv"));
}

TEST_CASE("thread count does not change a single output byte") {
  testutil::TempDir tmp("nibsim-cli-threads");
  REQUIRE(run(plan_cmd(kReference, "rate_max", tmp.path("t1"), 1)) == kExitOk);
  REQUIRE(run(plan_cmd(kReference, "rate_max", tmp.path("t4"), 4)) == kExitOk);
  for (const char* suffix : {".path.csv", ".timeline.csv", ".summary.csv"}) {
    CHECK(slurp(tmp.path("t1") + suffix) == slurp(tmp.path("t4") + suffix));
  }
}

TEST_CASE("sweep at offset zero matches the plan summary") {
  testutil::TempDir tmp("nibsim-cli-sweep0");
  REQUIRE(run(plan_cmd(kReference, "rate_max", tmp.path("plan"))) == kExitOk);
  REQUIRE(run(kBin + " sweep --scenario " + kReference +
              " --strategy rate_max --offsets 0:0:1 --out " +
              tmp.path("sweep")) == kExitOk);
  auto rows = lines_of(slurp(tmp.path("sweep") + ".sweep.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] ==
        "offset_db,total_bits,average_rate_bps,bits_net0,bits_net1,bits_net2,"
        "bits_net3");
  // Identical text, not merely close values.
  CHECK(split(rows[1], ',').at(1) ==
        first_field(tmp.path("plan") + ".summary.csv"));
}

TEST_CASE("sweep slope shows the bandwidth advantage of the planned path") {
  testutil::TempDir tmp("nibsim-cli-sweep");
  REQUIRE(run(kBin + " sweep --scenario " + kReference +
              " --strategy rate_max --offsets 30:60:5 --out " +
              tmp.path("wide")) == kExitOk);
  REQUIRE(run(kBin + " sweep --scenario " + kReference +
              " --strategy rate_max_cellular_only --offsets 30:60:5 --out " +
              tmp.path("narrow")) == kExitOk);
  auto parse_rates = [](const std::string& file) {
    std::vector<double> offs, rates;
    auto rows = lines_of(slurp(file));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      auto f = split(rows[i], ',');
      offs.push_back(std::stod(f.at(0)));
      rates.push_back(std::stod(f.at(2)));
    }
    return std::pair{offs, rates};
  };
  auto [wide_x, wide_y] = parse_rates(tmp.path("wide") + ".sweep.csv");
  auto [narrow_x, narrow_y] = parse_rates(tmp.path("narrow") + ".sweep.csv");
  REQUIRE(wide_x.size() == 7);
  REQUIRE(narrow_x.size() == 7);
  double wide_slope = testutil::regression_slope(wide_x, wide_y);
  double narrow_slope = testutil::regression_slope(narrow_x, narrow_y);
  CHECK(wide_slope > narrow_slope);
}

TEST_CASE("exit codes follow the error taxonomy") {
  testutil::TempDir tmp("nibsim-cli-exit");

  // Unreadable scenario file: I/O failure.
  CHECK(run(plan_cmd(tmp.path("missing.json"), "rate_max", tmp.path("x"))) ==
        kExitIo);

  // Structurally broken inputs: bad input.
  std::string garbled = tmp.path("garbled.json");
  spit(garbled, "{\"region\": [}");
  CHECK(run(plan_cmd(garbled, "rate_max", tmp.path("x"))) == kExitBadInput);

  std::string invalid = tmp.path("invalid.json");
  auto doc = nlohmann::json::parse(slurp(kReference));
  doc["mission"]["v_max_kmh"] = 0.0;
  spit(invalid, doc.dump());
  CHECK(run(plan_cmd(invalid, "rate_max", tmp.path("x"))) == kExitBadInput);

  CHECK(run(plan_cmd(kReference, "warp", tmp.path("x"))) == kExitBadInput);
  CHECK(run(kBin + " sweep --scenario " + kReference +
            " --strategy rate_max --offsets 9:1:2 --out " + tmp.path("x")) ==
        kExitBadInput);
  CHECK(run(kBin + " plan --scenario " + kReference) == kExitBadInput);
  CHECK(run(kBin + " teleport --scenario " + kReference) == kExitBadInput);

  // Bad path CSV fed to eval: bad input.
  std::string bad_path = tmp.path("bad.path.csv");
  spit(bad_path, "t_s,x_km,y_km\n0,eleven,2\n");
  CHECK(run(kBin + " eval --scenario " + kReference + " --path " + bad_path +
            " --out " + tmp.path("x")) == kExitBadInput);

  // Mission that cannot fit its time budget: infeasible.
  std::string squeezed = tmp.path("squeezed.json");
  doc = nlohmann::json::parse(slurp(kReference));
  doc["mission"]["total_time_s"] = 2640.0;
  spit(squeezed, doc.dump());
  CHECK(run(plan_cmd(squeezed, "rate_max", tmp.path("x"))) == kExitInfeasible);

  // Help is a successful run.
  CHECK(run(kBin + " --help") == kExitOk);
}

TEST_CASE("scenario digest is stable across runs") {
  testutil::TempDir tmp("nibsim-cli-digest");
  auto digest_of = [&](const std::string& tag) {
    std::string report = tmp.path(tag);
    int status = std::system(
        (plan_cmd(kReference, "shortest", tmp.path("p" + tag)) + " > " + report)
            .c_str());
    REQUIRE(WIFEXITED(status));
    REQUIRE(WEXITSTATUS(status) == kExitOk);
    std::string line = slurp(report);
    auto at = line.find("scenario_digest=");
    REQUIRE(at != std::string::npos);
    return line.substr(at, 16 + 17);
  };
  CHECK(digest_of("a") == digest_of("b"));
}
