// Scenario schema: load, validate, serialize, plus the built-in reference.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nibsim/geometry.hpp"
#include "nibsim/link_budget.hpp"

namespace nibsim {

struct Region {
  double min_x_km = 0.0;
  double min_y_km = 0.0;
  double max_x_km = 0.0;
  double max_y_km = 0.0;

  bool contains(const Position& p) const {
    return p.x_km >= min_x_km && p.x_km <= max_x_km && p.y_km >= min_y_km &&
           p.y_km <= max_y_km;
  }

  bool operator==(const Region&) const = default;
};

struct Waypoint {
  Position position;
  double dwell_s = 0.0;

  bool operator==(const Waypoint&) const = default;
};

/// Space-time discretization used by the planner. dt_s must divide
/// total_time_s and every dwell_s evenly; per-step reachability is
/// derived from v_max, not from the cell size.
struct PlanGrid {
  double cell_km = 1.0;
  double dt_s = 60.0;

  bool operator==(const PlanGrid&) const = default;
};

struct Scenario {
  Region region;
  std::vector<NetworkNode> networks;
  Position start;
  Position end;
  std::vector<Waypoint> waypoints;  // visited in listed order
  double total_time_s = 0.0;
  double v_max_kmh = 0.0;
  double noise_figure_db = 0.0;
  PlanGrid grid;
  double geo_slant_range_km = kDefaultGeoSlantRangeKm;

  bool operator==(const Scenario&) const = default;
};

class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation };

  ScenarioError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Parse and validate a UTF-8 JSON scenario document, applying defaults
/// (NF = 0 dB, GEO slant range 35786 km, grid cell 1 km / dt 60 s).
/// Throws ScenarioError with parse or validation context.
Scenario load_scenario(const std::string& text);

/// load_scenario on a file's contents. Throws std::ios_base::failure when
/// the file cannot be read.
Scenario load_scenario_file(const std::string& path);

/// Canonical JSON serialization; load_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// Built-in maritime scenario: 60x60 km region, GEO satellite, coast and
/// island cellular base stations, a ferry-borne WiFi crossing the region
/// at 40 km/h, two 1200 s waypoint dwells, 7200 s horizon, 30 km/h fleet.
Scenario reference_scenario();

}  // namespace nibsim
