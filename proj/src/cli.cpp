#include "nibsim/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace nibsim {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::ios_base::failure("cannot read file: " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open file for writing: " + path);
  out << bytes;
  out.flush();
  if (!out) throw std::ios_base::failure("cannot write file: " + path);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

NetworkFilter strategy_filter(Strategy st) {
  if (st == Strategy::RateMaxCellularOnly) {
    return NetworkFilter{std::set<NetworkKind>{NetworkKind::Cellular}};
  }
  return {};
}

PlanResult run_strategy(const Scenario& s, Strategy st, int threads) {
  switch (st) {
    case Strategy::RateMax:
      return plan_rate_max(s, {}, threads);
    case Strategy::Shortest:
      return plan_uniform_shortest(s);
    case Strategy::RateMaxCellularOnly:
      return plan_rate_max(s, strategy_filter(st), threads);
  }
  throw std::invalid_argument("unknown strategy");
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs fn, translating the error taxonomy into exit codes with a one-line
// diagnostic on stderr.
int guarded(const char* what, const std::function<void()>& fn);

}  // namespace

Strategy parse_strategy(const std::string& name) {
  if (name == "rate_max") return Strategy::RateMax;
  if (name == "shortest") return Strategy::Shortest;
  if (name == "rate_max_cellular_only") return Strategy::RateMaxCellularOnly;
  throw std::invalid_argument("unknown strategy '" + name +
                              "' (expected rate_max | shortest | "
                              "rate_max_cellular_only)");
}

std::vector<double> parse_offsets(const std::string& text) {
  double parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t next = i < 2 ? text.find(':', pos) : text.size();
    if (next == std::string::npos) {
      throw std::invalid_argument("offsets must be start:stop:step");
    }
    std::string field = text.substr(pos, next - pos);
    std::size_t used = 0;
    try {
      parts[i] = std::stod(field, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("offsets must be start:stop:step, got '" +
                                  text + "'");
    }
    if (used != field.size() || field.empty()) {
      throw std::invalid_argument("offsets must be start:stop:step, got '" +
                                  text + "'");
    }
    pos = next + 1;
  }
  double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0)) throw std::invalid_argument("offset step must be positive");
  if (stop < start) throw std::invalid_argument("offset stop must be >= start");
  std::vector<double> out;
  long long count = static_cast<long long>((stop - start) / step + 1e-9) + 1;
  if (count > 100000) throw std::invalid_argument("offset range too large");
  for (long long i = 0; i < count; ++i) out.push_back(start + i * step);
  return out;
}

std::uint64_t digest64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string path_csv(const Trajectory& traj) {
  std::string out = "t_s,x_km,y_km\n";
  for (const auto& s : traj.samples) {
    out += format_double(s.t_s);
    out += ',';
    out += format_double(s.pos.x_km);
    out += ',';
    out += format_double(s.pos.y_km);
    out += '\n';
  }
  return out;
}

Trajectory parse_path_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t_s,x_km,y_km") {
    throw std::invalid_argument("path CSV must start with header t_s,x_km,y_km");
  }
  Trajectory traj;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      std::size_t next = i < 2 ? line.find(',', pos) : line.size();
      if (next == std::string::npos) {
        throw std::invalid_argument("path CSV row " + std::to_string(row) +
                                    ": expected t_s,x_km,y_km");
      }
      std::string field = line.substr(pos, next - pos);
      std::size_t used = 0;
      try {
        v[i] = std::stod(field, &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (used != field.size() || field.empty()) {
        throw std::invalid_argument("path CSV row " + std::to_string(row) +
                                    ": bad number '" + field + "'");
      }
      pos = next + 1;
    }
    traj.samples.push_back(TrajectorySample{v[0], Position{v[1], v[2]}});
  }
  if (traj.samples.empty()) {
    throw std::invalid_argument("path CSV has no samples");
  }
  return traj;
}

std::string timeline_csv(const RateTimeline& tl) {
  std::string out = "t_s,chosen_network";
  for (const auto& [id, bits] : tl.per_network_bits) {
    (void)bits;
    out += ",rate_bps_net" + std::to_string(id);
  }
  out += ",step_bits\n";
  for (const auto& st : tl.steps) {
    out += format_double(st.t_s);
    out += ',';
    out += std::to_string(st.chosen_network);
    for (const auto& sm : st.samples) {
      out += ',';
      out += format_double(sm.rate_bps);
    }
    out += ',';
    out += format_double(st.step_bits);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const RateTimeline& tl) {
  std::string header = "objective_bits";
  std::string row = format_double(tl.total_bits);
  for (const auto& [id, bits] : tl.per_network_bits) {
    header += ",bits_net" + std::to_string(id);
    row += ',';
    row += format_double(bits);
  }
  header += ",effort_proxy\n";
  row += ',';
  row += format_double(tl.effort_proxy);
  row += '\n';
  return header + row;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out = "offset_db,total_bits,average_rate_bps";
  if (!points.empty()) {
    for (const auto& [id, bits] : points.front().per_network_bits) {
      (void)bits;
      out += ",bits_net" + std::to_string(id);
    }
  }
  out += '\n';
  for (const auto& p : points) {
    out += format_double(p.offset_db);
    out += ',';
    out += format_double(p.total_bits);
    out += ',';
    out += format_double(p.average_rate_bps);
    for (const auto& [id, bits] : p.per_network_bits) {
      (void)id;
      out += ',';
      out += format_double(bits);
    }
    out += '\n';
  }
  return out;
}

std::string RunReport::to_line() const {
  std::ostringstream out;
  out << "command=" << command << ' ' << params
      << " scenario_digest=" << scenario_digest
      << " total_bits=" << format_double(headline_bits)
      << " wall_ms=" << format_double(wall_ms);
  return out.str();
}

namespace {

int guarded(const char* what, const std::function<void()>& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ScenarioError& e) {
    std::cerr << what << ": " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << what << ": " << e.what() << '\n';
    return kExitBadInput;
  } catch (const SizeError& e) {
    std::cerr << what << ": " << e.what() << '\n';
    return kExitBadInput;
  } catch (const FeasibilityError& e) {
    std::cerr << what << ": " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::ios_base::failure& e) {
    std::cerr << what << ": " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace

int cmd_plan(const std::string& scenario_path, Strategy strategy,
             const std::string& out_prefix, int threads, RunReport& report) {
  return guarded("plan", [&] {
    Stopwatch clock;
    Scenario s = load_scenario_file(scenario_path);
    PlanResult res = run_strategy(s, strategy, threads);
    write_file(out_prefix + ".path.csv", path_csv(res.trajectory));
    write_file(out_prefix + ".timeline.csv", timeline_csv(res.timeline));
    write_file(out_prefix + ".summary.csv", summary_csv(res.timeline));
    report.command = "plan";
    report.params = "scenario=" + scenario_path + " out=" + out_prefix;
    report.scenario_digest = hex64(digest64(serialize_scenario(s)));
    report.headline_bits = res.timeline.total_bits;
    report.wall_ms = clock.ms();
  });
}

int cmd_eval(const std::string& scenario_path, const std::string& path_csv_in,
             const std::string& out_prefix, RunReport& report) {
  return guarded("eval", [&] {
    Stopwatch clock;
    Scenario s = load_scenario_file(scenario_path);
    Trajectory traj = parse_path_csv(read_file(path_csv_in));
    RateTimeline tl = evaluate_trajectory(s, traj);
    write_file(out_prefix + ".timeline.csv", timeline_csv(tl));
    write_file(out_prefix + ".summary.csv", summary_csv(tl));
    report.command = "eval";
    report.params = "scenario=" + scenario_path + " path=" + path_csv_in +
                    " out=" + out_prefix;
    report.scenario_digest = hex64(digest64(serialize_scenario(s)));
    report.headline_bits = tl.total_bits;
    report.wall_ms = clock.ms();
  });
}

int cmd_sweep(const std::string& scenario_path, Strategy strategy,
              const std::string& out_prefix, const std::string& offsets,
              int threads, RunReport& report) {
  return guarded("sweep", [&] {
    Stopwatch clock;
    Scenario s = load_scenario_file(scenario_path);
    std::vector<double> offs = parse_offsets(offsets);
    PlanResult res = run_strategy(s, strategy, threads);
    std::vector<SweepPoint> points =
        sweep_tx_offsets(s, res.trajectory, offs, strategy_filter(strategy));
    write_file(out_prefix + ".sweep.csv", sweep_csv(points));
    report.command = "sweep";
    report.params = "scenario=" + scenario_path + " offsets=" + offsets +
                    " out=" + out_prefix;
    report.scenario_digest = hex64(digest64(serialize_scenario(s)));
    report.headline_bits = points.empty() ? 0.0 : points.back().total_bits;
    report.wall_ms = clock.ms();
  });
}

}  // namespace nibsim
