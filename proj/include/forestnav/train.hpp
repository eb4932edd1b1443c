#pragma once

#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "forestnav/agent.hpp"
#include "forestnav/checkpoint.hpp"
#include "forestnav/config.hpp"
#include "forestnav/csv.hpp"
#include "forestnav/env.hpp"
#include "forestnav/normalize.hpp"
#include "forestnav/ppo.hpp"

namespace forestnav {

// RNG stream tags under the run seed.
inline constexpr std::uint64_t kStreamInit = 0;     // agent weight init
inline constexpr std::uint64_t kStreamAction = 1;   // per-env action noise
inline constexpr std::uint64_t kStreamEpisode = 2;  // per-env episode seeds
inline constexpr std::uint64_t kStreamShuffle = 3;  // minibatch shuffling

inline std::uint64_t episode_seed(std::uint64_t run_seed, int env_index, std::uint64_t episode) {
  return derive_seed(derive_seed(run_seed, kStreamEpisode, static_cast<std::uint64_t>(env_index)),
                     episode);
}

struct TrainResult {
  int updates = 0;
  long long env_steps = 0;
  long long episodes = 0;
  Agent<double> final_agent;
};

inline void save_obs_stats(const RunningMeanStd& stats, const std::string& path) {
  nlohmann::json j;
  j["mean"] = stats.mean;
  j["var"] = stats.var;
  j["count"] = stats.count;
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write observation stats: " + path);
  os << j.dump(2) << "\n";
}

inline RunningMeanStd load_obs_stats(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open observation stats: " + path);
  nlohmann::json j = nlohmann::json::parse(is);
  RunningMeanStd stats;
  stats.mean = j.at("mean").get<std::vector<double>>();
  stats.var = j.at("var").get<std::vector<double>>();
  stats.count = j.at("count").get<double>();
  return stats;
}

namespace detail {

struct EpisodeStat {
  double episode_return = 0.0;  // raw, unscaled rewards
  int length = 0;
  bool success = false;
};

template <typename Scalar>
struct EnvSlot {
  explicit EnvSlot(const ExperimentConfig& cfg)
      : env(cfg.kinematics, cfg.forest, cfg.lidar, cfg.env), action_rng(0) {}

  ForestEnv env;
  Rng action_rng;
  std::uint64_t next_episode = 0;
  std::vector<double> raw_obs;      // as emitted by the environment
  VecX<Scalar> policy_obs;          // what the agent sees (possibly normalized)
  double episode_return = 0.0;
  int episode_length = 0;
  double discounted_return = 0.0;   // for the optional reward scaler
  std::vector<EpisodeStat> finished;
};

template <typename Scalar>
VecX<Scalar> to_policy_obs(const std::vector<double>& obs) {
  VecX<Scalar> v(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) v(static_cast<Eigen::Index>(i)) = Scalar(obs[i]);
  return v;
}

}  // namespace detail

// PPO training loop. Collection runs env-major: environment e fills buffer
// rows [e*T, (e+1)*T); with threads > 1 the environments are simply split
// across workers, and because each slot owns its RNG streams the result does
// not depend on scheduling. The optional running normalizers are shared
// sequential state, so enabling either forces single-threaded collection.
// All artifacts (metrics.csv, checkpoints) are deterministic functions of
// the config.
template <typename Scalar>
TrainResult train(const ExperimentConfig& cfg, bool verbose = true) {
  validate(cfg);
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  const int obs_dim = cfg.env.obs_bins;
  const int action_dim = 2;
  const int steps_per_env = cfg.ppo.rollout_steps;
  const int num_envs = cfg.ppo.num_envs;
  const long long steps_per_update =
      static_cast<long long>(steps_per_env) * num_envs;
  const int num_updates = cfg.ppo.total_steps == 0
                              ? 0
                              : static_cast<int>((cfg.ppo.total_steps + steps_per_update - 1) /
                                                 steps_per_update);

  Rng init_rng(derive_seed(cfg.run_seed, kStreamInit));
  Agent<Scalar> agent(obs_dim, action_dim, init_rng);
  Adam<Scalar> optimizer(agent);
  Rng shuffle_rng(derive_seed(cfg.run_seed, kStreamShuffle));

  const bool norm_obs = cfg.ppo.normalize_observations;
  const bool norm_rew = cfg.ppo.normalize_rewards;
  RunningMeanStd obs_stats(static_cast<std::size_t>(obs_dim));
  RunningScalarStd return_stats;

  std::vector<detail::EnvSlot<Scalar>> slots;
  slots.reserve(static_cast<std::size_t>(num_envs));
  for (int e = 0; e < num_envs; ++e) {
    slots.emplace_back(cfg);
    auto& slot = slots.back();
    slot.action_rng = Rng(derive_seed(cfg.run_seed, kStreamAction, static_cast<std::uint64_t>(e)));
    slot.raw_obs = slot.env.reset(episode_seed(cfg.run_seed, e, slot.next_episode++));
    if (norm_obs) {
      obs_stats.update(slot.raw_obs);
      slot.policy_obs = detail::to_policy_obs<Scalar>(obs_stats.normalize(slot.raw_obs));
    } else {
      slot.policy_obs = detail::to_policy_obs<Scalar>(slot.raw_obs);
    }
  }

  const auto checkpoint_path = [&](const std::string& stem) {
    return (fs::path(cfg.out_dir) / (stem + ".bin")).string();
  };
  const auto save = [&](const std::string& stem) {
    const std::string path = checkpoint_path(stem);
    save_checkpoint(agent.template cast<double>(), path);
    if (norm_obs) save_obs_stats(obs_stats, path + ".norm.json");
  };

  char name[32];
  std::snprintf(name, sizeof(name), "checkpoint_%06d", 0);
  save(name);

  std::ofstream metrics((fs::path(cfg.out_dir) / "metrics.csv").string(), std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot write metrics.csv under " + cfg.out_dir);
  metrics << "update,steps,mean_return,mean_ep_len,success_rate,policy_loss,value_loss,entropy,"
             "clip_frac,approx_kl\n";

  std::deque<detail::EpisodeStat> window;  // most recent completed episodes
  constexpr std::size_t kWindow = 100;

  RolloutBuffer<Scalar> buffer(steps_per_env, num_envs, obs_dim, action_dim);
  TrainResult result;

  const auto collect_env = [&](int e) {
    auto& slot = slots[e];
    for (int t = 0; t < steps_per_env; ++t) {
      const Eigen::Index row = buffer.index(e, t);

      const VecX<Scalar> mean = agent.policy.forward_single(slot.policy_obs);
      RowX<Scalar> action(action_dim);
      for (int d = 0; d < action_dim; ++d) {
        const Scalar sigma = std::exp(agent.log_std(d));
        action(d) = mean(d) + sigma * Scalar(slot.action_rng.normal());
      }
      const Scalar log_prob =
          gaussian_log_prob<Scalar>(mean.transpose(), agent.log_std, action);
      const Scalar value = agent.value.forward_single(slot.policy_obs)(0);

      buffer.observations.row(row) = slot.policy_obs.transpose();
      buffer.actions.row(row) = action;
      buffer.log_probs(row) = log_prob;
      buffer.values(row) = value;

      const StepOutcome outcome = slot.env.step(
          Action{{static_cast<double>(action(0)), static_cast<double>(action(1))}});

      double reward = outcome.reward;
      slot.episode_return += reward;
      slot.episode_length += 1;
      if (norm_rew) {
        slot.discounted_return = cfg.ppo.gamma * slot.discounted_return + reward;
        return_stats.update(slot.discounted_return);
        reward = return_stats.scale(reward);
      }
      buffer.rewards(row) = Scalar(reward);
      buffer.terminated[row] = outcome.terminated ? 1 : 0;
      buffer.truncated[row] = outcome.truncated ? 1 : 0;

      std::vector<double> next_raw = outcome.observation;
      VecX<Scalar> next_policy_obs;
      if (norm_obs) {
        obs_stats.update(next_raw);
        next_policy_obs = detail::to_policy_obs<Scalar>(obs_stats.normalize(next_raw));
      } else {
        next_policy_obs = detail::to_policy_obs<Scalar>(next_raw);
      }

      if (outcome.terminated || outcome.truncated) {
        if (outcome.truncated)
          buffer.bootstrap_values(row) = agent.value.forward_single(next_policy_obs)(0);
        detail::EpisodeStat stat;
        stat.episode_return = slot.episode_return;
        stat.length = slot.episode_length;
        stat.success = outcome.terminated && !outcome.collided &&
                       outcome.state.position.x >= cfg.env.goal_distance_x;
        slot.finished.push_back(stat);
        slot.episode_return = 0.0;
        slot.episode_length = 0;
        slot.discounted_return = 0.0;
        slot.raw_obs = slot.env.reset(episode_seed(cfg.run_seed, e, slot.next_episode++));
        if (norm_obs) {
          obs_stats.update(slot.raw_obs);
          slot.policy_obs = detail::to_policy_obs<Scalar>(obs_stats.normalize(slot.raw_obs));
        } else {
          slot.policy_obs = detail::to_policy_obs<Scalar>(slot.raw_obs);
        }
      } else {
        slot.raw_obs = std::move(next_raw);
        slot.policy_obs = std::move(next_policy_obs);
        if (t == steps_per_env - 1)
          buffer.bootstrap_values(row) = agent.value.forward_single(slot.policy_obs)(0);
      }
    }
  };

  for (int update = 1; update <= num_updates; ++update) {
    const int workers =
        (norm_obs || norm_rew) ? 1 : std::min(cfg.ppo.threads, num_envs);
    if (workers <= 1) {
      for (int e = 0; e < num_envs; ++e) collect_env(e);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (int e = w; e < num_envs; e += workers) collect_env(e);
        });
      for (auto& th : pool) th.join();
    }
    result.env_steps += steps_per_update;

    for (auto& slot : slots) {  // merge episode events in env order
      for (const auto& stat : slot.finished) {
        window.push_back(stat);
        if (window.size() > kWindow) window.pop_front();
        ++result.episodes;
      }
      slot.finished.clear();
    }

    const UpdateStats<Scalar> stats = ppo_update(agent, optimizer, buffer, cfg.ppo, shuffle_rng);

    double mean_return = std::numeric_limits<double>::quiet_NaN();
    double mean_len = std::numeric_limits<double>::quiet_NaN();
    double success_rate = std::numeric_limits<double>::quiet_NaN();
    if (!window.empty()) {
      double r = 0.0;
      double l = 0.0;
      double s = 0.0;
      for (const auto& ep : window) {
        r += ep.episode_return;
        l += ep.length;
        s += ep.success ? 1.0 : 0.0;
      }
      mean_return = r / static_cast<double>(window.size());
      mean_len = l / static_cast<double>(window.size());
      success_rate = s / static_cast<double>(window.size());
    }

    metrics << update << ',' << result.env_steps << ',' << format_double(mean_return) << ','
            << format_double(mean_len) << ',' << format_double(success_rate) << ','
            << format_double(static_cast<double>(stats.policy_loss)) << ','
            << format_double(static_cast<double>(stats.value_loss)) << ','
            << format_double(static_cast<double>(stats.entropy)) << ','
            << format_double(static_cast<double>(stats.clip_frac)) << ','
            << format_double(static_cast<double>(stats.approx_kl)) << '\n';
    metrics.flush();

    if (verbose) {
      std::cerr << "update " << update << "/" << num_updates << "  steps " << result.env_steps
                << "  return " << mean_return << "  ep_len " << mean_len << "  success "
                << success_rate << "  kl " << static_cast<double>(stats.approx_kl) << "\n";
    }

    if (update % cfg.ppo.checkpoint_interval == 0 && update != num_updates) {
      std::snprintf(name, sizeof(name), "checkpoint_%06d", update);
      save(name);
    }
  }

  if (num_updates > 0) save("checkpoint_final");
  result.updates = num_updates;
  result.final_agent = agent.template cast<double>();
  return result;
}

inline TrainResult train_dispatch(const ExperimentConfig& cfg, bool verbose = true) {
  if (cfg.ppo.precision == "f32") return train<float>(cfg, verbose);
  return train<double>(cfg, verbose);
}

}  // namespace forestnav
