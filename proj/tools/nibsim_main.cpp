// nibsim: maritime multi-network trajectory planner / evaluator.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nibsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"maritime network simulator and trajectory optimizer"};
  app.require_subcommand(1);

  std::string scenario, out_prefix, strategy = "rate_max";
  std::string path_csv, offsets;
  int threads = 0;  // 0 = all cores

  CLI::App* plan = app.add_subcommand("plan", "plan a trajectory");
  plan->add_option("--scenario", scenario, "scenario JSON file")->required();
  plan->add_option("--strategy", strategy,
                   "rate_max | shortest | rate_max_cellular_only");
  plan->add_option("--out", out_prefix, "output prefix for CSV files")->required();
  plan->add_option("--threads", threads, "worker threads (0 = all cores)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a path CSV");
  eval->add_option("--scenario", scenario, "scenario JSON file")->required();
  eval->add_option("--path", path_csv, "input path CSV")->required();
  eval->add_option("--out", out_prefix, "output prefix for CSV files")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "TX-offset rate sweep");
  sweep->add_option("--scenario", scenario, "scenario JSON file")->required();
  sweep->add_option("--strategy", strategy,
                    "rate_max | shortest | rate_max_cellular_only");
  sweep->add_option("--offsets", offsets, "dB offsets as start:stop:step")
      ->required();
  sweep->add_option("--out", out_prefix, "output prefix for CSV files")->required();
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? nibsim::kExitOk : nibsim::kExitBadInput;
  }

  nibsim::Strategy st;
  try {
    st = nibsim::parse_strategy(strategy);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return nibsim::kExitBadInput;
  }

  nibsim::RunReport report;
  int code = nibsim::kExitBadInput;
  if (plan->parsed()) {
    code = nibsim::cmd_plan(scenario, st, out_prefix, threads, report);
  } else if (eval->parsed()) {
    code = nibsim::cmd_eval(scenario, path_csv, out_prefix, report);
  } else if (sweep->parsed()) {
    code = nibsim::cmd_sweep(scenario, st, out_prefix, offsets, threads, report);
  }
  if (code == nibsim::kExitOk) std::cout << report.to_line() << '\n';
  return code;
}
