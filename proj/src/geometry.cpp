#include "nibsim/geometry.hpp"

#include <cmath>

namespace nibsim {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

Position ferry_position_at(const FerryRoute& route, double t_s) {
  if (route.polyline.empty()) return Position{};
  if (route.polyline.size() == 1 || t_s <= route.start_t_s) {
    return route.polyline.front();
  }
  double remaining_km = route.speed_kmh * (t_s - route.start_t_s) / 3600.0;
  for (std::size_t i = 0; i + 1 < route.polyline.size(); ++i) {
    const Position& a = route.polyline[i];
    const Position& b = route.polyline[i + 1];
    double leg = distance(a, b);
    if (remaining_km <= leg || leg == 0.0) {
      if (leg == 0.0) continue;
      double f = remaining_km / leg;
      return Position{a.x_km + f * (b.x_km - a.x_km),
                      a.y_km + f * (b.y_km - a.y_km)};
    }
    remaining_km -= leg;
  }
  return route.polyline.back();  // parked at the terminal after the run
}

bool trajectory_feasible(const Trajectory& traj, double v_max_kmh) {
  const auto& s = traj.samples;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    double dt_s = s[i + 1].t_s - s[i].t_s;
    if (dt_s <= 0.0) return false;
    double v_kmh = distance(s[i].pos, s[i + 1].pos) / (dt_s / 3600.0);
    if (v_kmh > v_max_kmh + kSpeedSlackKmh) return false;
  }
  return true;
}

}  // namespace nibsim
