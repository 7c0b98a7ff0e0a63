#include "nibsim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

namespace nibsim {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long long kMaxDpStates = 50'000'000;
}  // namespace

GridIndexer::GridIndexer(const Region& region, double cell_km)
    : min_x_(region.min_x_km), min_y_(region.min_y_km), cell_km_(cell_km) {
  nx_ = static_cast<int>(
      std::floor((region.max_x_km - region.min_x_km) / cell_km + 1e-9));
  ny_ = static_cast<int>(
      std::floor((region.max_y_km - region.min_y_km) / cell_km + 1e-9));
}

int GridIndexer::cell_of(const Position& p) const {
  double fx = (p.x_km - min_x_) / cell_km_;
  double fy = (p.y_km - min_y_) / cell_km_;
  if (fx < 0.0 || fy < 0.0 || fx > nx_ + 1e-9 || fy > ny_ + 1e-9) return -1;
  int i = std::min(static_cast<int>(fx), nx_ - 1);
  int j = std::min(static_cast<int>(fy), ny_ - 1);
  return j * nx_ + i;
}

Position GridIndexer::center(int cell) const {
  int i = cell % nx_;
  int j = cell / nx_;
  return Position{min_x_ + (i + 0.5) * cell_km_, min_y_ + (j + 0.5) * cell_km_};
}

namespace {

// Waypoint/dwell progress automaton shared by the DP and the brute-force
// search. Slots enumerate (stage, dwell_progress) pairs plus one accepting
// slot; the automaton is deterministic, so a cell sequence fixes the slot.
struct MissionAutomaton {
  std::vector<int> wp_cell;
  std::vector<int> dwell_steps;
  std::vector<int> stage_base;
  std::vector<int> slot_stage;
  std::vector<int> slot_progress;
  int waypoint_count = 0;
  int slots = 0;

  void build(const Scenario& s, const GridIndexer& grid) {
    waypoint_count = static_cast<int>(s.waypoints.size());
    for (const auto& w : s.waypoints) {
      int cell = grid.cell_of(w.position);
      if (cell < 0) {
        throw FeasibilityError("waypoint not covered by the planner grid");
      }
      wp_cell.push_back(cell);
      dwell_steps.push_back(
          static_cast<int>(std::llround(w.dwell_s / s.grid.dt_s)));
    }
    for (int i = 0; i < waypoint_count; ++i) {
      stage_base.push_back(slots);
      int width = std::max(1, dwell_steps[i]);
      for (int p = 0; p < width; ++p) {
        slot_stage.push_back(i);
        slot_progress.push_back(p);
      }
      slots += width;
    }
    slot_stage.push_back(waypoint_count);
    slot_progress.push_back(0);
    slots += 1;  // accepting slot
  }

  int accepting_slot() const { return slots - 1; }

  int settle(int stage, int cell) const {
    while (stage < waypoint_count && dwell_steps[stage] == 0 &&
           cell == wp_cell[stage]) {
      ++stage;
    }
    return stage == waypoint_count ? accepting_slot() : stage_base[stage];
  }

  int initial(int start_cell) const { return settle(0, start_cell); }

  int advance(int slot, int src_cell, int dst_cell) const {
    int stage = slot_stage[slot];
    if (stage == waypoint_count) return slot;
    if (src_cell == dst_cell && dst_cell == wp_cell[stage] &&
        dwell_steps[stage] > 0) {
      int p = slot_progress[slot] + 1;
      if (p == dwell_steps[stage]) return settle(stage + 1, dst_cell);
      return stage_base[stage] + p;
    }
    // Travel, or a hold away from the pending waypoint: progress resets,
    // since dwells must be served in one contiguous block.
    return settle(stage, dst_cell);
  }
};

struct PlanContext {
  GridIndexer grid;
  std::vector<NetworkNode> nodes;
  MissionAutomaton mission;
  int steps = 0;
  double dt = 0.0;
  double noise_figure_db = 0.0;
  int start_cell = -1;
  int end_cell = -1;
  std::vector<std::pair<int, int>> moves;  // (dj, di) cell offsets
  std::vector<double> reward;              // steps x cells

  double rew(int k, int cell) const {
    return reward[static_cast<std::size_t>(k) * grid.cell_count() + cell];
  }
};

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_chunks(int n, int threads, Fn&& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int b = t * chunk;
    int e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

PlanContext build_context(const Scenario& s, const NetworkFilter& filter,
                          int threads) {
  PlanContext ctx{GridIndexer(s.region, s.grid.cell_km),
                  active_networks(s, filter),
                  {},
                  0,
                  s.grid.dt_s,
                  s.noise_figure_db,
                  -1,
                  -1,
                  {},
                  {}};
  if (ctx.grid.nx() < 1 || ctx.grid.ny() < 1) {
    throw FeasibilityError("grid cell_km larger than the region");
  }
  ctx.steps = static_cast<int>(std::llround(s.total_time_s / s.grid.dt_s));
  if (ctx.steps < 1) {
    throw FeasibilityError("total_time_s shorter than one dt_s step");
  }

  ctx.start_cell = ctx.grid.cell_of(s.start);
  ctx.end_cell = ctx.grid.cell_of(s.end);
  if (ctx.start_cell < 0 || ctx.end_cell < 0) {
    throw FeasibilityError("start or end not covered by the planner grid");
  }
  ctx.mission.build(s, ctx.grid);

  // Continuous-space budget check: straight-line tour plus dwells must fit.
  double tour_km = 0.0;
  Position prev = s.start;
  double dwell_total = 0.0;
  for (const auto& w : s.waypoints) {
    tour_km += distance(prev, w.position);
    prev = w.position;
    dwell_total += w.dwell_s;
  }
  tour_km += distance(prev, s.end);
  double min_travel_s = tour_km / s.v_max_kmh * 3600.0;
  if (min_travel_s + dwell_total > s.total_time_s + 1e-6) {
    std::ostringstream msg;
    msg << "infeasible mission: minimum travel " << min_travel_s
        << " s plus dwell " << dwell_total << " s exceeds total_time_s "
        << s.total_time_s;
    throw FeasibilityError(msg.str());
  }

  // Per-step moves: any destination whose center is at most v_max*dt away.
  // The slack is half the feasibility tolerance, so emitted trajectories
  // always pass trajectory_feasible.
  double reach_km = (s.v_max_kmh + 0.5 * kSpeedSlackKmh) * s.grid.dt_s / 3600.0;
  int radius = static_cast<int>(std::floor(reach_km / s.grid.cell_km + 1e-12));
  for (int dj = -radius; dj <= radius; ++dj) {
    for (int di = -radius; di <= radius; ++di) {
      if (s.grid.cell_km * std::hypot(di, dj) <= reach_km) {
        ctx.moves.emplace_back(dj, di);
      }
    }
  }

  const int cells = ctx.grid.cell_count();
  ctx.reward.resize(static_cast<std::size_t>(ctx.steps) * cells);
  parallel_chunks(ctx.steps, resolve_threads(threads), [&](int kb, int ke) {
    for (int k = kb; k < ke; ++k) {
      double t_mid = step_midpoint(static_cast<double>(k) * ctx.dt, ctx.dt);
      for (int c = 0; c < cells; ++c) {
        LinkChoice lc = best_link(ctx.nodes, ctx.grid.center(c), t_mid,
                                  ctx.noise_figure_db);
        ctx.reward[static_cast<std::size_t>(k) * cells + c] =
            ctx.dt * lc.chosen.rate_bps;
      }
    }
  });
  return ctx;
}

PlanResult finish_plan(const Scenario& s, const NetworkFilter& filter,
                       const PlanContext& ctx, const std::vector<int>& cells,
                       double objective) {
  Trajectory traj;
  traj.samples.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    traj.samples.push_back(TrajectorySample{static_cast<double>(k) * ctx.dt,
                                            ctx.grid.center(cells[k])});
  }
  PlanResult out;
  out.timeline = evaluate_trajectory(s, traj, filter);
  out.trajectory = std::move(traj);
  out.objective_bits = objective;
  return out;
}

}  // namespace

PlanResult plan_rate_max(const Scenario& s, const NetworkFilter& filter,
                         int threads) {
  PlanContext ctx = build_context(s, filter, threads);
  const int cells = ctx.grid.cell_count();
  const int S = ctx.mission.slots;
  const int N = ctx.steps;
  const int nx = ctx.grid.nx();
  const int ny = ctx.grid.ny();

  long long states = static_cast<long long>(N + 1) * cells * S;
  if (states > kMaxDpStates) {
    std::ostringstream msg;
    msg << "instance too large: " << states << " DP states exceeds "
        << kMaxDpStates;
    throw SizeError(msg.str());
  }

  auto idx = [&](int k, int cell, int slot) -> std::size_t {
    return (static_cast<std::size_t>(k) * cells + cell) * S + slot;
  };
  std::vector<double> value(states, kNegInf);
  std::vector<int> parent(states, -1);
  value[idx(0, ctx.start_cell, ctx.mission.initial(ctx.start_cell))] = 0.0;

  int nthreads = resolve_threads(threads);
  for (int k = 0; k < N; ++k) {
    const double* prev = value.data() + idx(k, 0, 0);
    double* next = value.data() + idx(k + 1, 0, 0);
    int* back = parent.data() + idx(k + 1, 0, 0);
    parallel_chunks(cells, nthreads, [&](int cb, int ce) {
      for (int dest = cb; dest < ce; ++dest) {
        int di = dest % nx;
        int dj = dest / nx;
        double r = ctx.rew(k, dest);
        // Predecessors scan in ascending (cell, slot) order; strict
        // improvement keeps the first maximizer, which pins ties to the
        // lowest source cell and the earliest slot.
        for (const auto& [mdj, mdi] : ctx.moves) {
          int pi = di + mdi;
          int pj = dj + mdj;
          if (pi < 0 || pj < 0 || pi >= nx || pj >= ny) continue;
          int pred = pj * nx + pi;
          for (int ps = 0; ps < S; ++ps) {
            double pv = prev[static_cast<std::size_t>(pred) * S + ps];
            if (pv == kNegInf) continue;
            int ns = ctx.mission.advance(ps, pred, dest);
            double cand = pv + r;
            std::size_t at = static_cast<std::size_t>(dest) * S + ns;
            if (cand > next[at]) {
              next[at] = cand;
              back[at] = pred * S + ps;
            }
          }
        }
      }
    });
  }

  int accept = ctx.mission.accepting_slot();
  double objective = value[idx(N, ctx.end_cell, accept)];
  if (objective == kNegInf) {
    throw FeasibilityError(
        "infeasible mission: no grid path completes every waypoint dwell and "
        "reaches the end cell within total_time_s");
  }

  std::vector<int> path(N + 1);
  int cell = ctx.end_cell;
  int slot = accept;
  for (int k = N; k > 0; --k) {
    path[k] = cell;
    int enc = parent[idx(k, cell, slot)];
    cell = enc / S;
    slot = enc % S;
  }
  path[0] = cell;

  PlanResult out = finish_plan(s, filter, ctx, path, objective);
  return out;
}

PlanResult plan_uniform_shortest(const Scenario& s,
                                 const NetworkFilter& filter) {
  std::vector<Position> points;
  points.push_back(s.start);
  double dwell_total = 0.0;
  for (const auto& w : s.waypoints) {
    points.push_back(w.position);
    dwell_total += w.dwell_s;
  }
  points.push_back(s.end);

  double tour_km = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    tour_km += distance(points[i], points[i + 1]);
  }
  const double dt = s.grid.dt_s;
  const int N = static_cast<int>(std::llround(s.total_time_s / dt));
  double travel_s = s.total_time_s - dwell_total;
  double speed_kmh = tour_km > 0.0 ? tour_km / (travel_s / 3600.0) : 0.0;
  if (speed_kmh > s.v_max_kmh + kSpeedSlackKmh) {
    std::ostringstream msg;
    msg << "infeasible mission: uniform tour speed " << speed_kmh
        << " km/h exceeds v_max_kmh " << s.v_max_kmh;
    throw FeasibilityError(msg.str());
  }

  Trajectory traj;
  traj.samples.push_back(TrajectorySample{0.0, s.start});
  auto emit = [&](const Position& p) {
    traj.samples.push_back(
        TrajectorySample{static_cast<double>(traj.samples.size()) * dt, p});
  };
  for (std::size_t leg = 0; leg + 1 < points.size(); ++leg) {
    const Position& a = points[leg];
    const Position& b = points[leg + 1];
    double leg_km = distance(a, b);
    int leg_steps = 0;
    if (leg_km > 0.0) {
      double leg_steps_f = leg_km / speed_kmh * 3600.0 / dt;
      leg_steps = static_cast<int>(std::llround(leg_steps_f));
      if (std::abs(leg_steps_f - leg_steps) > 1e-6) {
        throw FeasibilityError(
            "uniform shortest path: leg arrival does not land on a step "
            "boundary; adjust grid dt_s");
      }
      for (int j = 1; j <= leg_steps; ++j) {
        double f = static_cast<double>(j) / leg_steps;
        Position p = j == leg_steps
                         ? b
                         : Position{a.x_km + f * (b.x_km - a.x_km),
                                    a.y_km + f * (b.y_km - a.y_km)};
        emit(p);
      }
    }
    if (leg + 1 < points.size() - 1) {
      int dwell_steps = static_cast<int>(
          std::llround(s.waypoints[leg].dwell_s / dt));
      for (int j = 0; j < dwell_steps; ++j) emit(b);
    }
  }
  while (static_cast<int>(traj.samples.size()) <= N && tour_km == 0.0) {
    emit(s.end);
  }
  if (static_cast<int>(traj.samples.size()) != N + 1) {
    throw FeasibilityError(
        "uniform shortest path: leg durations do not tile total_time_s; "
        "adjust grid dt_s");
  }

  PlanResult out;
  out.timeline = evaluate_trajectory(s, traj, filter);
  out.trajectory = std::move(traj);
  out.objective_bits = 0.0;
  for (const auto& st : out.timeline.steps) out.objective_bits += st.step_bits;
  return out;
}

PlanResult brute_force_plan(const Scenario& s, const NetworkFilter& filter) {
  PlanContext ctx = build_context(s, filter, 1);
  const int cells = ctx.grid.cell_count();
  const int N = ctx.steps;
  const int nx = ctx.grid.nx();
  const int ny = ctx.grid.ny();

  // The automaton is a deterministic function of the cell sequence, so the
  // DFS visits exactly one node per reachable cell-sequence prefix. Count
  // prefixes first and refuse oversized instances.
  std::vector<std::uint64_t> cnt(cells, 0), nxt(cells, 0);
  cnt[ctx.start_cell] = 1;
  std::uint64_t visit_sum = 1;
  const std::uint64_t cap = kBruteForceLimit + 1;
  for (int k = 0; k < N && visit_sum <= kBruteForceLimit; ++k) {
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int dest = 0; dest < cells; ++dest) {
      int di = dest % nx;
      int dj = dest / nx;
      std::uint64_t acc = 0;
      for (const auto& [mdj, mdi] : ctx.moves) {
        int pi = di + mdi;
        int pj = dj + mdj;
        if (pi < 0 || pj < 0 || pi >= nx || pj >= ny) continue;
        acc += cnt[pj * nx + pi];
      }
      nxt[dest] = std::min(acc, cap);
    }
    cnt.swap(nxt);
    for (auto c : cnt) visit_sum = std::min(visit_sum + c, cap);
  }
  if (visit_sum > kBruteForceLimit) {
    std::ostringstream msg;
    msg << "instance too large for brute force: more than " << kBruteForceLimit
        << " path prefixes";
    throw SizeError(msg.str());
  }

  struct Dfs {
    const PlanContext& ctx;
    int nx, ny, N;
    std::vector<int> cur;
    std::vector<int> best_path;
    double best = kNegInf;
    bool found = false;

    void run(int k, int cell, int slot, double acc) {
      if (k == N) {
        if (cell == ctx.end_cell && slot == ctx.mission.accepting_slot() &&
            (!found || acc > best)) {
          best = acc;
          best_path = cur;
          found = true;
        }
        return;
      }
      int ci = cell % nx;
      int cj = cell / nx;
      for (const auto& [mdj, mdi] : ctx.moves) {
        int di = ci + mdi;
        int dj = cj + mdj;
        if (di < 0 || dj < 0 || di >= nx || dj >= ny) continue;
        int dest = dj * nx + di;
        cur[k + 1] = dest;
        run(k + 1, dest, ctx.mission.advance(slot, cell, dest),
            acc + ctx.rew(k, dest));
      }
    }
  };

  Dfs dfs{ctx, nx, ny, N, std::vector<int>(N + 1), {}, kNegInf, false};
  dfs.cur[0] = ctx.start_cell;
  dfs.run(0, ctx.start_cell, ctx.mission.initial(ctx.start_cell), 0.0);
  if (!dfs.found) {
    throw FeasibilityError(
        "infeasible mission: no grid path completes every waypoint dwell and "
        "reaches the end cell within total_time_s");
  }
  return finish_plan(s, filter, ctx, dfs.best_path, dfs.best);
}

}  // namespace nibsim
