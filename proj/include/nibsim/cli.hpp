// Command implementations shared by the nibsim binary and the CLI tests.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nibsim/evaluator.hpp"
#include "nibsim/planner.hpp"
#include "nibsim/scenario.hpp"

namespace nibsim {

enum class Strategy { RateMax, Shortest, RateMaxCellularOnly };

Strategy parse_strategy(const std::string& name);  // throws std::invalid_argument

/// Parse an inclusive "start:stop:step" offset range in dB, e.g. "30:60:5".
/// Requires step > 0 and start <= stop; throws std::invalid_argument.
std::vector<double> parse_offsets(const std::string& text);

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;

/// One-line run summary printed to stdout by the binary.
struct RunReport {
  std::string command;
  std::string params;
  std::string scenario_digest;  // FNV-1a64 of the canonical serialization
  double headline_bits = 0.0;   // objective / total bits of the run
  double wall_ms = 0.0;

  std::string to_line() const;
};

/// plan: writes <out>.path.csv, <out>.timeline.csv, <out>.summary.csv.
int cmd_plan(const std::string& scenario_path, Strategy strategy,
             const std::string& out_prefix, int threads, RunReport& report);

/// eval: evaluates the path CSV against the scenario and writes
/// <out>.timeline.csv and <out>.summary.csv.
int cmd_eval(const std::string& scenario_path, const std::string& path_csv_in,
             const std::string& out_prefix, RunReport& report);

/// sweep: plans with the strategy, then re-evaluates the fixed trajectory
/// under each TX offset; writes <out>.sweep.csv.
int cmd_sweep(const std::string& scenario_path, Strategy strategy,
              const std::string& out_prefix, const std::string& offsets,
              int threads, RunReport& report);

/// FNV-1a 64-bit digest of a byte string (stable across platforms).
std::uint64_t digest64(const std::string& bytes);

// CSV helpers shared with the tests.
std::string format_double(double v);  // shortest round-trip form
std::string path_csv(const Trajectory& traj);
Trajectory parse_path_csv(const std::string& text);
std::string timeline_csv(const RateTimeline& tl);
std::string summary_csv(const RateTimeline& tl);
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace nibsim
