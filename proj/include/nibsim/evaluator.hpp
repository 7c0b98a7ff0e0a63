// Trajectory evaluation: constraint checks, per-step rate accounting,
// and delivered-bits totals.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "nibsim/geometry.hpp"
#include "nibsim/link_budget.hpp"
#include "nibsim/scenario.hpp"

namespace nibsim {

class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Midpoint of the step starting at t_s. The planner prices rewards and the
/// evaluator samples links through this one expression so both agree
/// bit-for-bit on every step.
inline double step_midpoint(double t_s, double dt_s) { return t_s + 0.5 * dt_s; }

/// One planner/evaluator time step [t_s, t_s + dt_s): the fleet ends the
/// step at `pos`; links are sampled at the midpoint t_s + dt_s / 2.
struct StepRecord {
  double t_s = 0.0;
  double dt_s = 0.0;
  Position pos;
  std::vector<LinkSample> samples;  // one per network, ascending id
  int chosen_network = -1;
  double rate_bps = 0.0;   // best achievable rate at the midpoint
  double step_bits = 0.0;  // rate_bps * dt_s
};

struct RateTimeline {
  std::vector<StepRecord> steps;
  std::map<int, double> per_network_bits;  // keyed by network id
  double total_bits = 0.0;                 // sum of buckets, ascending id
  double effort_proxy = 0.0;               // sum of dt * v_kmh^3 over steps
};

/// The networks a run actually uses: filtered by kind and sorted by id.
/// Throws ScenarioError (validation) when the filter leaves nothing.
std::vector<NetworkNode> active_networks(const Scenario& s,
                                         const NetworkFilter& filter);

/// Evaluate a dt-uniform trajectory against a scenario. Validates that
/// samples start at t = 0, are spaced exactly grid.dt_s apart, end at
/// total_time_s, stay inside the region, and respect v_max (with the
/// kSpeedSlackKmh tolerance); throws FeasibilityError otherwise.
/// Waypoint visit order/dwell is the planner's concern, not checked here.
RateTimeline evaluate_trajectory(const Scenario& s, const Trajectory& traj,
                                 const NetworkFilter& filter = {});

/// Evaluate the same trajectory under per-network TX power offsets.
/// Offset d applies identically to every network's tx_power_dbm, which
/// shifts every SNR sample by the same amount before rates are computed.
struct SweepPoint {
  double offset_db = 0.0;
  double total_bits = 0.0;
  double average_rate_bps = 0.0;
  std::map<int, double> per_network_bits;
};

std::vector<SweepPoint> sweep_tx_offsets(const Scenario& s,
                                         const Trajectory& traj,
                                         const std::vector<double>& offsets,
                                         const NetworkFilter& filter = {});

}  // namespace nibsim
