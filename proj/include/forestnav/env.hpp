#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "forestnav/forest.hpp"
#include "forestnav/kinematics.hpp"
#include "forestnav/lidar.hpp"

namespace forestnav {

struct EnvConfig {
  double goal_distance_x = 30.0;        // mission length along +X [m]
  double proximity_threshold = 0.15;    // clearance that triggers the penalty [m]
  double proximity_penalty = -0.25;
  double collision_penalty = -1.5;
  double centerline_coeff = 0.1;        // reward per meter of |y|
  double speed_coeff = 0.8;             // reward per m/s of v_x
  double wrong_direction_factor = 3.0;  // scales the speed term when v_x < 0
  // Literal reading of the wrong-direction rule: multiply the (already
  // negative) speed term by -factor, turning backward flight into reward.
  // Off by default; kept as a switch for auditability.
  bool literal_wrong_direction_sign = false;
  double drone_radius = 0.25;           // [m]
  int max_steps = 600;
  int obs_bins = 40;                    // must divide the lidar beam count

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

struct Action {
  Vec2 v_req;  // policy units in [-1, 1] per component, scaled by v_max
};

struct RewardBreakdown {
  double proximity = 0.0;
  double collision = 0.0;
  double centerline = 0.0;
  double speed = 0.0;
};

struct StepOutcome {
  std::vector<double> observation;  // obs_bins entries in [-1, 1]
  double reward = 0.0;
  bool terminated = false;  // collision or goal reached
  bool truncated = false;   // step cap hit
  RewardBreakdown breakdown;
  DroneState state;
  double nearest_surface = 0.0;
  bool collided = false;
};

// Min-pool the sweep into obs_bins sectors (nearest obstacle per sector),
// then map (0, max_range] into (-1, 1] via r -> (r - h2)/h2 with h2 half the
// sensor range.
inline std::vector<double> normalize_scan(const std::vector<double>& distances, int obs_bins,
                                          double max_range) {
  const int group = static_cast<int>(distances.size()) / obs_bins;
  const double h2 = max_range / 2.0;
  std::vector<double> obs(static_cast<std::size_t>(obs_bins));
  for (int b = 0; b < obs_bins; ++b) {
    double nearest = distances[static_cast<std::size_t>(b) * group];
    for (int j = 1; j < group; ++j)
      nearest = std::min(nearest, distances[static_cast<std::size_t>(b) * group + j]);
    obs[b] = (nearest - h2) / h2;
  }
  return obs;
}

inline std::vector<double> normalize_scan(const LidarScan& scan, int obs_bins, double max_range) {
  return normalize_scan(scan.distances, obs_bins, max_range);
}

// Reward components, evaluated on the post-step state:
//   proximity  — flat penalty when the nearest tree surface is closer than
//                the threshold (but not penetrating),
//   collision  — flat penalty on penetration,
//   centerline — -coeff * |y|,
//   speed      — coeff * v_x, with the magnitude scaled by
//                wrong_direction_factor when v_x < 0.
inline double compute_reward(const DroneState& state, double nearest_surface, bool collided,
                             const EnvConfig& cfg, RewardBreakdown& breakdown) {
  breakdown.proximity =
      (nearest_surface >= 0.0 && nearest_surface < cfg.proximity_threshold)
          ? cfg.proximity_penalty
          : 0.0;
  breakdown.collision = collided ? cfg.collision_penalty : 0.0;
  breakdown.centerline = -cfg.centerline_coeff * std::abs(state.position.y);
  double speed = cfg.speed_coeff * state.velocity.x;
  if (state.velocity.x < 0.0)
    speed *= cfg.literal_wrong_direction_sign ? -cfg.wrong_direction_factor
                                              : cfg.wrong_direction_factor;
  breakdown.speed = speed;
  return breakdown.proximity + breakdown.collision + breakdown.centerline + breakdown.speed;
}

inline double compute_reward(const DroneState& state, double nearest_surface, bool collided,
                             const EnvConfig& cfg) {
  RewardBreakdown b;
  return compute_reward(state, nearest_surface, collided, cfg, b);
}

// Episodic task: fly goal_distance_x meters along +X through a freshly
// generated forest without touching a tree. One instance is single-threaded;
// independent instances share nothing mutable.
class ForestEnv {
 public:
  ForestEnv(KinematicsConfig kin, ForestConfig forest, LidarConfig lidar, EnvConfig env)
      : kin_(kin), forest_cfg_(forest), lidar_(lidar), env_(env) {
    if (env_.obs_bins <= 0 || lidar_.beam_count % env_.obs_bins != 0)
      throw std::invalid_argument("env.obs_bins must divide lidar.beam_count");
  }

  // Regenerate the map from `seed` and place the drone at the origin at rest.
  std::vector<double> reset(std::uint64_t seed) {
    ForestConfig cfg = forest_cfg_;
    cfg.seed = seed;
    map_ = generate(cfg);
    return reset_common();
  }

  // Run an episode on a fixed, caller-provided map (replay path).
  std::vector<double> reset_with_map(ForestMap map) {
    map_ = std::move(map);
    return reset_common();
  }

  StepOutcome step(const Action& action) {
    if (done_) throw std::logic_error("step() called on a finished episode; call reset()");

    const Vec2 v_req{std::clamp(action.v_req.x, -1.0, 1.0) * kin_.v_max,
                     std::clamp(action.v_req.y, -1.0, 1.0) * kin_.v_max};
    state_ = forestnav::step(state_, v_req, kin_);
    ++step_count_;

    StepOutcome out;
    out.state = state_;
    out.nearest_surface = collision_check(map_.value(), state_.position, env_.drone_radius);
    out.collided = out.nearest_surface < 0.0;
    out.reward = compute_reward(state_, out.nearest_surface, out.collided, env_, out.breakdown);
    out.terminated = out.collided || state_.position.x >= env_.goal_distance_x;
    out.truncated = !out.terminated && step_count_ >= env_.max_steps;
    done_ = out.terminated || out.truncated;

    scan_into(map_.value(), state_.position, lidar_, scan_scratch_);
    out.observation = normalize_scan(scan_scratch_, env_.obs_bins, lidar_.max_range);
    return out;
  }

  bool done() const { return done_; }
  int steps() const { return step_count_; }
  const DroneState& state() const { return state_; }
  const ForestMap& map() const { return map_.value(); }
  const EnvConfig& env_config() const { return env_; }
  const KinematicsConfig& kinematics_config() const { return kin_; }
  const LidarConfig& lidar_config() const { return lidar_; }

 private:
  std::vector<double> reset_common() {
    state_ = DroneState{};
    step_count_ = 0;
    done_ = false;
    scan_into(map_.value(), state_.position, lidar_, scan_scratch_);
    return normalize_scan(scan_scratch_, env_.obs_bins, lidar_.max_range);
  }

  KinematicsConfig kin_;
  ForestConfig forest_cfg_;
  LidarConfig lidar_;
  EnvConfig env_;

  std::optional<ForestMap> map_;
  DroneState state_;
  std::vector<double> scan_scratch_;
  int step_count_ = 0;
  bool done_ = true;  // step() before the first reset() is a contract violation
};

}  // namespace forestnav
