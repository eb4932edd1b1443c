#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "forestnav/csv.hpp"
#include "forestnav/env.hpp"

namespace forestnav {

struct TrajectoryRow {
  int step = 0;
  double x = 0.0, y = 0.0, vx = 0.0, vy = 0.0;
  double reward = 0.0, r_prox = 0.0, r_coll = 0.0, r_center = 0.0, r_speed = 0.0;
  bool terminated = false;
  bool truncated = false;
};

inline constexpr const char* kTrajectoryHeader =
    "step,x,y,vx,vy,reward,r_prox,r_coll,r_center,r_speed,terminated,truncated";

// One deterministic episode on an already-reset environment. Row 0 is the
// initial state; one row follows per executed step. The optional sink
// receives the initial observation's raw scan position and each post-step
// position (used for per-step scan dumps).
template <typename PolicyFn, typename StepFn>
std::vector<TrajectoryRow> rollout_trajectory(ForestEnv& env, std::vector<double> initial_obs,
                                              PolicyFn&& policy, StepFn&& after_step) {
  std::vector<TrajectoryRow> rows;
  TrajectoryRow start;
  start.x = env.state().position.x;
  start.y = env.state().position.y;
  rows.push_back(start);

  std::vector<double> obs = std::move(initial_obs);
  while (!env.done()) {
    const StepOutcome out = env.step(Action{policy(obs)});
    obs = out.observation;
    after_step(env.steps());
    TrajectoryRow row;
    row.step = env.steps();
    row.x = out.state.position.x;
    row.y = out.state.position.y;
    row.vx = out.state.velocity.x;
    row.vy = out.state.velocity.y;
    row.reward = out.reward;
    row.r_prox = out.breakdown.proximity;
    row.r_coll = out.breakdown.collision;
    row.r_center = out.breakdown.centerline;
    row.r_speed = out.breakdown.speed;
    row.terminated = out.terminated;
    row.truncated = out.truncated;
    rows.push_back(row);
  }
  return rows;
}

template <typename PolicyFn>
std::vector<TrajectoryRow> rollout_trajectory(ForestEnv& env, std::vector<double> initial_obs,
                                              PolicyFn&& policy) {
  return rollout_trajectory(env, std::move(initial_obs), std::forward<PolicyFn>(policy),
                            [](int) {});
}

inline void write_trajectory(const std::vector<TrajectoryRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write trajectory: " + path);
  os << kTrajectoryHeader << "\n";
  for (const auto& r : rows) {
    os << r.step << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
       << format_double(r.vx) << ',' << format_double(r.vy) << ',' << format_double(r.reward)
       << ',' << format_double(r.r_prox) << ',' << format_double(r.r_coll) << ','
       << format_double(r.r_center) << ',' << format_double(r.r_speed) << ','
       << (r.terminated ? 1 : 0) << ',' << (r.truncated ? 1 : 0) << '\n';
  }
  if (!os) throw std::runtime_error("trajectory write failed: " + path);
}

class TrajectoryParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads back the (x, y) path; reports malformed rows with their line number.
inline std::vector<Vec2> read_trajectory_path(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw TrajectoryParseError("cannot open trajectory: " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("step,", 0) != 0)
    throw TrajectoryParseError(path + ": line 1: missing trajectory header");
  std::vector<Vec2> points;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 3)
      throw TrajectoryParseError(path + ": line " + std::to_string(line_no) +
                                 ": expected at least 3 columns");
    bool ok_x = false;
    bool ok_y = false;
    const double x = parse_double(fields[1], ok_x);
    const double y = parse_double(fields[2], ok_y);
    if (!ok_x || !ok_y)
      throw TrajectoryParseError(path + ": line " + std::to_string(line_no) +
                                 ": x/y are not numbers");
    points.push_back({x, y});
  }
  return points;
}

// Scan dump: one row per beam.
inline void write_scan_csv(const LidarConfig& cfg, const std::vector<double>& distances,
                           const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write scan: " + path);
  os << "angle_rad,distance_m\n";
  for (int k = 0; k < cfg.beam_count; ++k)
    os << format_double(beam_angle(cfg, k)) << ',' << format_double(distances[k]) << '\n';
  if (!os) throw std::runtime_error("scan write failed: " + path);
}

}  // namespace forestnav
