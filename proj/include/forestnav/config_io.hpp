#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "forestnav/config.hpp"
#include "forestnav/map_io.hpp"

namespace forestnav {

inline void to_json(nlohmann::json& j, const KinematicsConfig& c) {
  j = nlohmann::json{{"dt", c.dt}, {"max_acc", c.max_acc}, {"v_max", c.v_max}};
}

inline void from_json(const nlohmann::json& j, KinematicsConfig& c) {
  j.at("dt").get_to(c.dt);
  j.at("max_acc").get_to(c.max_acc);
  j.at("v_max").get_to(c.v_max);
}

inline void to_json(nlohmann::json& j, const LidarConfig& c) {
  j = nlohmann::json{
      {"max_range", c.max_range}, {"beam_count", c.beam_count}, {"angle_offset", c.angle_offset}};
}

inline void from_json(const nlohmann::json& j, LidarConfig& c) {
  j.at("max_range").get_to(c.max_range);
  j.at("beam_count").get_to(c.beam_count);
  j.at("angle_offset").get_to(c.angle_offset);
}

inline void to_json(nlohmann::json& j, const EnvConfig& c) {
  j = nlohmann::json{{"goal_distance_x", c.goal_distance_x},
                     {"proximity_threshold", c.proximity_threshold},
                     {"proximity_penalty", c.proximity_penalty},
                     {"collision_penalty", c.collision_penalty},
                     {"centerline_coeff", c.centerline_coeff},
                     {"speed_coeff", c.speed_coeff},
                     {"wrong_direction_factor", c.wrong_direction_factor},
                     {"literal_wrong_direction_sign", c.literal_wrong_direction_sign},
                     {"drone_radius", c.drone_radius},
                     {"max_steps", c.max_steps},
                     {"obs_bins", c.obs_bins}};
}

inline void from_json(const nlohmann::json& j, EnvConfig& c) {
  j.at("goal_distance_x").get_to(c.goal_distance_x);
  j.at("proximity_threshold").get_to(c.proximity_threshold);
  j.at("proximity_penalty").get_to(c.proximity_penalty);
  j.at("collision_penalty").get_to(c.collision_penalty);
  j.at("centerline_coeff").get_to(c.centerline_coeff);
  j.at("speed_coeff").get_to(c.speed_coeff);
  j.at("wrong_direction_factor").get_to(c.wrong_direction_factor);
  j.at("literal_wrong_direction_sign").get_to(c.literal_wrong_direction_sign);
  j.at("drone_radius").get_to(c.drone_radius);
  j.at("max_steps").get_to(c.max_steps);
  j.at("obs_bins").get_to(c.obs_bins);
}

inline void to_json(nlohmann::json& j, const PpoConfig& c) {
  j = nlohmann::json{{"gamma", c.gamma},
                     {"gae_lambda", c.gae_lambda},
                     {"clip_ratio", c.clip_ratio},
                     {"learning_rate", c.learning_rate},
                     {"epochs", c.epochs},
                     {"minibatch_size", c.minibatch_size},
                     {"rollout_steps", c.rollout_steps},
                     {"num_envs", c.num_envs},
                     {"value_coeff", c.value_coeff},
                     {"entropy_coeff", c.entropy_coeff},
                     {"grad_clip", c.grad_clip},
                     {"total_steps", c.total_steps},
                     {"checkpoint_interval", c.checkpoint_interval},
                     {"precision", c.precision},
                     {"normalize_observations", c.normalize_observations},
                     {"normalize_rewards", c.normalize_rewards},
                     {"threads", c.threads}};
}

inline void from_json(const nlohmann::json& j, PpoConfig& c) {
  j.at("gamma").get_to(c.gamma);
  j.at("gae_lambda").get_to(c.gae_lambda);
  j.at("clip_ratio").get_to(c.clip_ratio);
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("epochs").get_to(c.epochs);
  j.at("minibatch_size").get_to(c.minibatch_size);
  j.at("rollout_steps").get_to(c.rollout_steps);
  j.at("num_envs").get_to(c.num_envs);
  j.at("value_coeff").get_to(c.value_coeff);
  j.at("entropy_coeff").get_to(c.entropy_coeff);
  j.at("grad_clip").get_to(c.grad_clip);
  j.at("total_steps").get_to(c.total_steps);
  j.at("checkpoint_interval").get_to(c.checkpoint_interval);
  j.at("precision").get_to(c.precision);
  j.at("normalize_observations").get_to(c.normalize_observations);
  j.at("normalize_rewards").get_to(c.normalize_rewards);
  j.at("threads").get_to(c.threads);
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"run_seed", c.run_seed}, {"out_dir", c.out_dir},
                     {"kinematics", c.kinematics}, {"forest", c.forest},
                     {"lidar", c.lidar},          {"env", c.env},
                     {"ppo", c.ppo}};
}

// Sections and fields may be omitted; anything missing keeps its default.
inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  const auto merge = [&j](const char* key, auto& target) {
    if (!j.contains(key)) return;
    nlohmann::json full = target;  // defaults
    full.update(j.at(key));
    full.get_to(target);
  };
  if (j.contains("run_seed")) j.at("run_seed").get_to(c.run_seed);
  if (j.contains("out_dir")) j.at("out_dir").get_to(c.out_dir);
  merge("kinematics", c.kinematics);
  merge("forest", c.forest);
  merge("lidar", c.lidar);
  merge("env", c.env);
  merge("ppo", c.ppo);
}

// Parse + validate; throws ConfigError / json exceptions with field context.
inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg = nlohmann::json::parse(is).get<ExperimentConfig>();
  validate(cfg);
  return cfg;
}

inline void save_experiment_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot write config file: " + path);
  os << nlohmann::json(cfg).dump(2) << "\n";
}

}  // namespace forestnav
