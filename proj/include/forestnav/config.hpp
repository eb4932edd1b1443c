#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "forestnav/env.hpp"
#include "forestnav/forest.hpp"
#include "forestnav/kinematics.hpp"
#include "forestnav/lidar.hpp"
#include "forestnav/ppo.hpp"

namespace forestnav {

inline bool operator==(const KinematicsConfig& a, const KinematicsConfig& b) {
  return a.dt == b.dt && a.max_acc == b.max_acc && a.v_max == b.v_max;
}

inline bool operator==(const LidarConfig& a, const LidarConfig& b) {
  return a.max_range == b.max_range && a.beam_count == b.beam_count &&
         a.angle_offset == b.angle_offset;
}

// Whole-experiment configuration: one file drives every subcommand.
struct ExperimentConfig {
  KinematicsConfig kinematics;
  ForestConfig forest;
  LidarConfig lidar;
  EnvConfig env;
  PpoConfig ppo;
  std::uint64_t run_seed = 1;
  std::string out_dir = "runs/default";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Field-level and cross-field checks; throws ConfigError naming the field.
inline void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.kinematics.dt > 0.0, "kinematics.dt must be > 0");
  require(c.kinematics.max_acc > 0.0, "kinematics.max_acc must be > 0");
  require(c.kinematics.v_max > 0.0, "kinematics.v_max must be > 0");

  require(c.forest.cell_side > 0.0, "forest.cell_side must be > 0");
  require(c.forest.grid_extent >= 1, "forest.grid_extent must be >= 1");
  require(c.forest.trees_per_grid_min >= 0 &&
              c.forest.trees_per_grid_max >= c.forest.trees_per_grid_min,
          "forest.trees_per_grid range must be ordered and nonnegative");
  require(c.forest.tree_radius_min > 0.0 &&
              c.forest.tree_radius_max >= c.forest.tree_radius_min,
          "forest.tree_radius range must be positive and ordered");
  require(c.forest.trees_min_distance >= 0.0, "forest.trees_min_distance must be >= 0");
  require(c.forest.start_clearance >= 0.0, "forest.start_clearance must be >= 0");

  require(c.lidar.max_range > 0.0, "lidar.max_range must be > 0");
  require(c.lidar.beam_count >= 1, "lidar.beam_count must be >= 1");

  require(c.env.goal_distance_x > 0.0, "env.goal_distance_x must be > 0");
  require(c.env.proximity_threshold > 0.0, "env.proximity_threshold must be > 0");
  require(c.env.drone_radius >= 0.0, "env.drone_radius must be >= 0");
  require(c.env.max_steps > 0, "env.max_steps must be > 0");
  require(c.env.obs_bins > 0, "env.obs_bins must be > 0");

  require(c.ppo.gamma >= 0.0 && c.ppo.gamma <= 1.0, "ppo.gamma must lie in [0, 1]");
  require(c.ppo.gae_lambda >= 0.0 && c.ppo.gae_lambda <= 1.0, "ppo.gae_lambda must lie in [0, 1]");
  require(c.ppo.clip_ratio > 0.0, "ppo.clip_ratio must be > 0");
  require(c.ppo.epochs > 0, "ppo.epochs must be > 0");
  require(c.ppo.minibatch_size > 0, "ppo.minibatch_size must be > 0");
  require(c.ppo.rollout_steps > 0, "ppo.rollout_steps must be > 0");
  require(c.ppo.num_envs > 0, "ppo.num_envs must be > 0");
  require(c.ppo.total_steps >= 0, "ppo.total_steps must be >= 0");
  require(c.ppo.checkpoint_interval > 0, "ppo.checkpoint_interval must be > 0");
  require(c.ppo.threads > 0, "ppo.threads must be > 0");
  require(c.ppo.precision == "f64" || c.ppo.precision == "f32",
          "ppo.precision must be \"f64\" or \"f32\"");

  // Cross-field consistency.
  require(c.lidar.beam_count % c.env.obs_bins == 0,
          "env.obs_bins must divide lidar.beam_count");
  require(c.forest.cell_side >= c.lidar.max_range + c.forest.tree_radius_max,
          "forest.cell_side must be >= lidar.max_range + forest.tree_radius_max "
          "(keeps 3x3-block queries exact)");
}

}  // namespace forestnav
