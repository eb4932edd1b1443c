#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "forestnav/checkpoint.hpp"
#include "forestnav/config_io.hpp"
#include "forestnav/eval.hpp"
#include "forestnav/map_io.hpp"
#include "forestnav/svg_plot.hpp"
#include "forestnav/train.hpp"
#include "forestnav/trajectory.hpp"

namespace forestnav {

// Subcommand bodies. The CLI binary only parses flags and forwards here;
// errors surface as exceptions.

inline void run_gen_map(const std::string& config_path, std::optional<std::uint64_t> seed,
                        const std::string& out_path, std::ostream& info = std::cout) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed) cfg.forest.seed = *seed;
  const ForestMap map = generate(cfg.forest);
  save_map(map, out_path);

  info << "map seed " << map.config().seed << ", trees per cell:\n";
  for (int iy = map.extent() - 1; iy >= 0; --iy) {  // top row printed first
    info << "  ";
    for (int ix = 0; ix < map.extent(); ++ix) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%4zu", map.cell(ix, iy).size());
      info << buf;
    }
    info << "\n";
  }
  info << "total " << map.tree_count() << " trees -> " << out_path << "\n";
}

inline void run_scan(const std::string& config_path, const std::optional<std::string>& map_path,
                     std::optional<std::uint64_t> seed, Vec2 position,
                     const std::string& out_path) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed) cfg.forest.seed = *seed;
  const ForestMap map = map_path ? load_map(*map_path) : generate(cfg.forest);
  const LidarScan sweep = scan(map, position, cfg.lidar);
  write_scan_csv(cfg.lidar, sweep.distances, out_path);
}

inline TrainResult run_train(const std::string& config_path, std::optional<std::uint64_t> seed,
                             const std::optional<std::string>& out_dir, bool verbose = true) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  if (seed) cfg.run_seed = *seed;
  if (out_dir) cfg.out_dir = *out_dir;
  return train_dispatch(cfg, verbose);
}

// Loads a checkpoint plus the observation-normalizer sidecar when the config
// says training used one.
inline MeanPolicy load_policy(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
  MeanPolicy policy;
  policy.agent = load_checkpoint(checkpoint_path);
  require_shapes(policy.agent, cfg.env.obs_bins, 2);
  if (cfg.ppo.normalize_observations)
    policy.obs_stats = load_obs_stats(checkpoint_path + ".norm.json");
  return policy;
}

inline void write_eval_csv(const EvalReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write eval report: " + path);
  os << "episode,seed,steps,final_x,final_abs_y,collided,total_reward,success\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    os << i << ',' << r.seed << ',' << r.steps << ',' << format_double(r.final_x) << ','
       << format_double(r.final_abs_y) << ',' << (r.collided ? 1 : 0) << ','
       << format_double(r.total_reward) << ',' << (r.success ? 1 : 0) << '\n';
  }
}

inline void print_eval_report(const EvalReport& report, std::ostream& os) {
  os << "episode  seed        steps  final_x  final_|y|  collided  reward     success\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    char line[160];
    std::snprintf(line, sizeof(line), "%-8zu %-11llu %-6d %-8.2f %-10.2f %-9s %-10.2f %s\n", i,
                  static_cast<unsigned long long>(r.seed), r.steps, r.final_x, r.final_abs_y,
                  r.collided ? "yes" : "no", r.total_reward, r.success ? "yes" : "no");
    os << line;
  }
  os << "success rate: " << report.successes << "/" << report.episodes << " = "
     << format_double(report.success_rate) << "\n";
}

inline EvalReport run_eval(const std::string& config_path, const std::string& checkpoint_path,
                           int episodes, std::optional<std::uint64_t> base_seed,
                           const std::optional<std::string>& out_dir,
                           std::ostream& info = std::cout) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  const std::uint64_t seed0 = base_seed.value_or(cfg.run_seed);
  const MeanPolicy policy = load_policy(cfg, checkpoint_path);
  const EvalReport report = evaluate(cfg, policy, episodes, seed0);
  print_eval_report(report, info);
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_eval_csv(report, (std::filesystem::path(*out_dir) / "eval_report.csv").string());
  }
  return report;
}

// Scripted stand-in policies, mostly for baselines.
inline EvalReport run_eval_scripted(const std::string& config_path, const std::string& which,
                                    int episodes, std::optional<std::uint64_t> base_seed,
                                    const std::optional<std::string>& out_dir,
                                    std::ostream& info = std::cout) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  const std::uint64_t seed0 = base_seed.value_or(cfg.run_seed);
  EvalReport report;
  if (which == "forward") {
    report = evaluate(cfg, ConstantForwardPolicy{}, episodes, seed0);
  } else if (which == "zero") {
    report = evaluate(cfg, [](const std::vector<double>&) { return Vec2{0.0, 0.0}; }, episodes,
                      seed0);
  } else {
    throw std::invalid_argument("unknown scripted policy: " + which +
                                " (expected \"forward\" or \"zero\")");
  }
  print_eval_report(report, info);
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_eval_csv(report, (std::filesystem::path(*out_dir) / "eval_report.csv").string());
  }
  return report;
}

inline void run_replay(const std::string& config_path, const std::string& checkpoint_path,
                       const std::string& map_path, std::uint64_t seed,
                       const std::string& out_dir, bool dump_scans,
                       std::ostream& info = std::cout) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  const MeanPolicy policy = load_policy(cfg, checkpoint_path);
  const ForestMap map = load_map(map_path);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  if (dump_scans) fs::create_directories((fs::path(out_dir) / "scans").string());

  ForestEnv env(cfg.kinematics, cfg.forest, cfg.lidar, cfg.env);
  std::vector<double> obs = env.reset_with_map(map);

  const auto dump = [&](int step_index) {
    if (!dump_scans) return;
    char name[32];
    std::snprintf(name, sizeof(name), "step_%04d.csv", step_index);
    const LidarScan s = scan(env.map(), env.state().position, cfg.lidar);
    write_scan_csv(cfg.lidar, s.distances, (fs::path(out_dir) / "scans" / name).string());
  };

  dump(0);
  std::vector<TrajectoryRow> rows =
      rollout_trajectory(env, obs, policy, [&](int step_index) { dump(step_index); });
  const std::string traj_path = (fs::path(out_dir) / "trajectory.csv").string();
  write_trajectory(rows, traj_path);
  info << "replay seed " << seed << ": " << (rows.size() - 1) << " steps, final x "
       << format_double(env.state().position.x) << " -> " << traj_path << "\n";
}

inline void run_plot(const std::string& trajectory_path, const std::string& map_path,
                     const std::string& out_path, double goal_x) {
  const ForestMap map = load_map(map_path);
  const std::vector<Vec2> path = read_trajectory_path(trajectory_path);
  write_map_svg(map, path, goal_x, out_path);
}

}  // namespace forestnav
