// Planar positions, trajectories and the ferry's time-parameterized route.
#pragma once

#include <vector>

namespace nibsim {

struct Position {
  double x_km = 0.0;
  double y_km = 0.0;

  bool operator==(const Position&) const = default;
};

struct TrajectorySample {
  double t_s = 0.0;  // seconds since mission start
  Position pos;

  bool operator==(const TrajectorySample&) const = default;
};

/// Ordered position samples; timestamps strictly increasing, first at t = 0.
struct Trajectory {
  std::vector<TrajectorySample> samples;

  bool operator==(const Trajectory&) const = default;
};

/// Polyline traversed once at constant speed, starting at start_t_s.
/// Before departure the ferry sits at the first point, after completing
/// the route it stays at the last one. Looping routes are expressed by
/// repeating polyline points.
struct FerryRoute {
  std::vector<Position> polyline;
  double speed_kmh = 0.0;
  double start_t_s = 0.0;

  bool operator==(const FerryRoute&) const = default;
};

/// Slack applied to every per-segment speed check (km/h).
inline constexpr double kSpeedSlackKmh = 1e-9;

/// Euclidean distance in km.
double distance(const Position& a, const Position& b);

/// Arc-length parameterization of the ferry route at constant speed,
/// clamped to the route endpoints outside [start_t_s, completion].
Position ferry_position_at(const FerryRoute& route, double t_s);

/// True iff every consecutive-pair speed is at most v_max_kmh (+ slack).
/// Non-increasing timestamps make a trajectory infeasible.
bool trajectory_feasible(const Trajectory& traj, double v_max_kmh);

}  // namespace nibsim
