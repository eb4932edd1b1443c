#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forestnav/agent.hpp"
#include "forestnav/config.hpp"
#include "forestnav/env.hpp"
#include "forestnav/normalize.hpp"

namespace forestnav {

struct EpisodeRecord {
  std::uint64_t seed = 0;
  int steps = 0;
  double final_x = 0.0;
  double final_abs_y = 0.0;
  bool collided = false;
  double total_reward = 0.0;
  bool success = false;  // final_x >= goal and no collision
};

struct EvalReport {
  int episodes = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::vector<EpisodeRecord> records;
};

// Deterministic evaluation policy: the Gaussian mean, no sampling. Applies
// the training-time observation normalizer when one was saved with the
// checkpoint.
struct MeanPolicy {
  Agent<double> agent;
  std::optional<RunningMeanStd> obs_stats;

  Vec2 operator()(const std::vector<double>& obs) const {
    const std::vector<double>& x = obs_stats ? stash(obs) : obs;
    VecX<double> v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = x[i];
    const VecX<double> mean = agent.policy.forward_single(v);
    return {mean(0), mean(1)};
  }

 private:
  const std::vector<double>& stash(const std::vector<double>& obs) const {
    scratch_ = obs_stats->normalize(obs);
    return scratch_;
  }
  mutable std::vector<double> scratch_;
};

// Always fly straight ahead at full commanded speed.
struct ConstantForwardPolicy {
  Vec2 operator()(const std::vector<double>&) const { return {1.0, 0.0}; }
};

// The paper-protocol mission battery: `episodes` flights, each on a freshly
// generated map with seed base_seed + index.
template <typename PolicyFn>
EvalReport evaluate(const ExperimentConfig& cfg, PolicyFn&& policy, int episodes,
                    std::uint64_t base_seed) {
  EvalReport report;
  report.records.reserve(static_cast<std::size_t>(episodes));
  ForestEnv env(cfg.kinematics, cfg.forest, cfg.lidar, cfg.env);
  for (int i = 0; i < episodes; ++i) {
    EpisodeRecord rec;
    rec.seed = base_seed + static_cast<std::uint64_t>(i);
    std::vector<double> obs = env.reset(rec.seed);
    StepOutcome outcome;
    while (!env.done()) {
      outcome = env.step(Action{policy(obs)});
      obs = outcome.observation;
      rec.total_reward += outcome.reward;
    }
    rec.steps = env.steps();
    rec.final_x = env.state().position.x;
    rec.final_abs_y = std::abs(env.state().position.y);
    rec.collided = outcome.collided;
    rec.success = !rec.collided && rec.final_x >= cfg.env.goal_distance_x;
    if (rec.success) ++report.successes;
    report.records.push_back(rec);
  }
  report.episodes = episodes;
  report.success_rate =
      episodes > 0 ? static_cast<double>(report.successes) / episodes : 0.0;
  return report;
}

}  // namespace forestnav
