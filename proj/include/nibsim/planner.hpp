// Space-time trajectory planners over a discretized region grid.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nibsim/evaluator.hpp"
#include "nibsim/geometry.hpp"
#include "nibsim/link_budget.hpp"
#include "nibsim/scenario.hpp"

namespace nibsim {

class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps region cells to indices. Cells are cell_km squares tiling the
/// region from (min_x, min_y); positions snap to cell centers.
class GridIndexer {
 public:
  GridIndexer(const Region& region, double cell_km);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int cell_count() const { return nx_ * ny_; }

  int cell_of(const Position& p) const;  // -1 when outside the region
  Position center(int cell) const;

 private:
  double min_x_, min_y_, cell_km_;
  int nx_, ny_;
};

struct PlanResult {
  Trajectory trajectory;
  RateTimeline timeline;
  double objective_bits = 0.0;  // DP objective; equals timeline totals
};

/// Rate-max planner: dynamic program over (cell, time step, mission stage,
/// dwell progress) maximizing delivered bits. Each step the fleet moves to
/// any cell whose center is within v_max * dt, or holds position; dwells
/// must be served contiguously at the waypoint cell. Throws
/// FeasibilityError when no path meets the waypoint/deadline constraints
/// and SizeError when the grid/step count exceeds internal limits.
/// threads > 1 parallelizes the sweep without changing any output bit.
PlanResult plan_rate_max(const Scenario& s, const NetworkFilter& filter = {},
                         int threads = 1);

/// Baseline: straight legs between mission points at the uniform speed
/// that makes travel plus dwells fill total_time_s exactly. Requires leg
/// arrival times to land on step boundaries; throws FeasibilityError
/// otherwise (the reference scenario is constructed so they do).
PlanResult plan_uniform_shortest(const Scenario& s,
                                 const NetworkFilter& filter = {});

/// Exhaustive search over every admissible space-time path; same rewards
/// and tie-breaks as plan_rate_max. Guards with a path-count pre-pass and
/// throws SizeError above kBruteForceLimit enumerated paths.
inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

PlanResult brute_force_plan(const Scenario& s, const NetworkFilter& filter = {});

}  // namespace nibsim
