#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "forestnav/agent.hpp"

namespace forestnav {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_ratio = 0.2;
  double learning_rate = 3e-4;
  int epochs = 10;
  int minibatch_size = 64;
  int rollout_steps = 2048;  // T, per environment
  int num_envs = 8;          // N
  double value_coeff = 0.5;
  double entropy_coeff = 0.0;
  double grad_clip = 0.5;          // global gradient norm bound
  long long total_steps = 2'000'000;
  int checkpoint_interval = 10;    // updates between periodic checkpoints
  std::string precision = "f64";   // "f64" | "f32"
  bool normalize_observations = false;
  bool normalize_rewards = false;
  int threads = 1;

  friend bool operator==(const PpoConfig&, const PpoConfig&) = default;
};

class PpoDivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experience for one update: T steps from each of N environments, stored
// env-major (row/index = env * T + t). terminated/truncated flag the
// transition that ended an episode; bootstrap_values holds V(s_{t+1}) for
// truncated transitions and for each env's final row, and is unused
// elsewhere.
template <typename Scalar>
struct RolloutBuffer {
  int steps_per_env = 0;
  int num_envs = 0;

  MatX<Scalar> observations;  // (N*T) x obs_dim
  MatX<Scalar> actions;       // (N*T) x action_dim
  VecX<Scalar> log_probs;
  VecX<Scalar> rewards;
  VecX<Scalar> values;            // V(s_t) under the collecting policy
  VecX<Scalar> bootstrap_values;  // V(s_{t+1}) where needed, else 0
  std::vector<std::uint8_t> terminated;
  std::vector<std::uint8_t> truncated;

  RolloutBuffer() = default;

  RolloutBuffer(int steps, int envs, int obs_dim, int action_dim)
      : steps_per_env(steps), num_envs(envs) {
    const Eigen::Index n = static_cast<Eigen::Index>(steps) * envs;
    observations.setZero(n, obs_dim);
    actions.setZero(n, action_dim);
    log_probs.setZero(n);
    rewards.setZero(n);
    values.setZero(n);
    bootstrap_values.setZero(n);
    terminated.assign(static_cast<std::size_t>(n), 0);
    truncated.assign(static_cast<std::size_t>(n), 0);
  }

  Eigen::Index size() const { return static_cast<Eigen::Index>(steps_per_env) * num_envs; }
  Eigen::Index index(int env, int t) const {
    return static_cast<Eigen::Index>(env) * steps_per_env + t;
  }
};

template <typename Scalar>
struct GaeResult {
  VecX<Scalar> advantages;
  VecX<Scalar> returns;
};

// Reverse-recursion GAE per environment:
//   delta_t = r_t + gamma * V(s_{t+1}) - V(s_t)
//   A_t     = delta_t + gamma * lambda * A_{t+1}
// A terminated transition zeroes both V(s_{t+1}) and the tail; a truncated
// one bootstraps V(s_{t+1}) from bootstrap_values but still cuts the tail.
// Each env's final row bootstraps with V of the state left at the chunk end.
template <typename Scalar>
GaeResult<Scalar> gae_advantages(const RolloutBuffer<Scalar>& buf, double gamma, double lambda) {
  GaeResult<Scalar> out;
  out.advantages.resize(buf.size());
  out.returns.resize(buf.size());
  for (int e = 0; e < buf.num_envs; ++e) {
    Scalar carry = 0;
    for (int t = buf.steps_per_env - 1; t >= 0; --t) {
      const Eigen::Index i = buf.index(e, t);
      const bool ended = buf.terminated[i] || buf.truncated[i];
      Scalar next_value;
      if (buf.terminated[i]) {
        next_value = 0;
      } else if (buf.truncated[i] || t == buf.steps_per_env - 1) {
        next_value = buf.bootstrap_values(i);
      } else {
        next_value = buf.values(i + 1);
      }
      const Scalar delta =
          buf.rewards(i) + Scalar(gamma) * next_value - buf.values(i);
      carry = delta + Scalar(gamma) * Scalar(lambda) * (ended ? Scalar(0) : carry);
      out.advantages(i) = carry;
      out.returns(i) = carry + buf.values(i);
    }
  }
  return out;
}

template <typename Scalar>
struct MiniBatch {
  MatX<Scalar> observations;
  MatX<Scalar> actions;
  VecX<Scalar> old_log_probs;
  VecX<Scalar> advantages;
  VecX<Scalar> returns;
};

template <typename Scalar>
struct LossResult {
  Scalar total = 0;
  Scalar policy_loss = 0;
  Scalar value_loss = 0;  // unweighted mean squared error to returns
  Scalar entropy = 0;
  Scalar clip_frac = 0;
  Scalar approx_kl = 0;
  AgentGrads<Scalar> grads;
};

// Clipped-surrogate PPO loss over one minibatch, with gradients hand-derived
// through the Gaussian log-density and both MLPs:
//   L = -mean(min(ratio*A, clip(ratio)*A)) + c_v * mse(V, R) - c_e * H
// The policy term's gradient flows through `ratio` only where the raw branch
// attains the min (elsewhere the clipped constant wins and the sample
// contributes nothing).
template <typename Scalar>
LossResult<Scalar> compute_loss_and_grads(const Agent<Scalar>& agent,
                                          const MiniBatch<Scalar>& mb, const PpoConfig& cfg) {
  const int batch = static_cast<int>(mb.observations.rows());
  const int action_dim = agent.action_dim();
  const Scalar inv_batch = Scalar(1) / Scalar(batch);
  const Scalar eps = Scalar(cfg.clip_ratio);

  LossResult<Scalar> out;
  out.grads = AgentGrads<Scalar>::zero_like(agent);

  typename Mlp<Scalar>::Cache policy_cache;
  const MatX<Scalar> mean = agent.policy.forward(mb.observations, &policy_cache);
  typename Mlp<Scalar>::Cache value_cache;
  const MatX<Scalar> value = agent.value.forward(mb.observations, &value_cache);

  VecX<Scalar> sigma(action_dim);
  for (int d = 0; d < action_dim; ++d) sigma(d) = std::exp(agent.log_std(d));

  // z_{id} = (a_{id} - mu_{id}) / sigma_d
  MatX<Scalar> z = mb.actions - mean;
  for (int d = 0; d < action_dim; ++d) z.col(d) /= sigma(d);

  const Scalar log_std_sum = agent.log_std.sum();
  VecX<Scalar> new_log_probs(batch);
  for (int i = 0; i < batch; ++i)
    new_log_probs(i) = Scalar(-0.5) * z.row(i).squaredNorm() - log_std_sum -
                       Scalar(action_dim) * Scalar(kHalfLog2Pi);

  MatX<Scalar> d_mean = MatX<Scalar>::Zero(batch, action_dim);
  Scalar policy_loss = 0;
  Scalar clip_count = 0;
  Scalar kl_sum = 0;
  for (int i = 0; i < batch; ++i) {
    const Scalar log_ratio = new_log_probs(i) - mb.old_log_probs(i);
    const Scalar ratio = std::exp(log_ratio);
    const Scalar adv = mb.advantages(i);
    const Scalar raw = ratio * adv;
    const Scalar clipped = std::clamp(ratio, Scalar(1) - eps, Scalar(1) + eps) * adv;
    policy_loss -= std::min(raw, clipped) * inv_batch;
    if (std::abs(ratio - Scalar(1)) > eps) clip_count += 1;
    kl_sum += (ratio - Scalar(1)) - log_ratio;

    if (raw <= clipped) {
      // dL/dlogp_i = -(A_i/B) * ratio; then through the Gaussian density:
      // dlogp/dmu_d = z_d / sigma_d, dlogp/dlogstd_d = z_d^2 - 1.
      const Scalar d_log_prob = -adv * inv_batch * ratio;
      for (int d = 0; d < action_dim; ++d) {
        d_mean(i, d) = d_log_prob * z(i, d) / sigma(d);
        out.grads.log_std(d) += d_log_prob * (z(i, d) * z(i, d) - Scalar(1));
      }
    }
  }
  out.policy_loss = policy_loss;
  out.clip_frac = clip_count * inv_batch;
  out.approx_kl = kl_sum * inv_batch;

  // Value head: L_v = mean((v - R)^2), dL_v/dv = 2 (v - R) / B.
  MatX<Scalar> d_value(batch, 1);
  Scalar value_loss = 0;
  for (int i = 0; i < batch; ++i) {
    const Scalar err = value(i, 0) - mb.returns(i);
    value_loss += err * err * inv_batch;
    d_value(i, 0) = Scalar(2) * err * inv_batch * Scalar(cfg.value_coeff);
  }
  out.value_loss = value_loss;

  out.entropy = gaussian_entropy(agent.log_std);
  for (int d = 0; d < action_dim; ++d)
    out.grads.log_std(d) -= Scalar(cfg.entropy_coeff);  // dH/dlogstd_d = 1

  out.total = policy_loss + Scalar(cfg.value_coeff) * value_loss -
              Scalar(cfg.entropy_coeff) * out.entropy;

  out.grads.policy = agent.policy.backward(policy_cache, d_mean);
  out.grads.value = agent.value.backward(value_cache, d_value);
  return out;
}

// Adam with bias correction; moments follow Agent::visit_params order.
template <typename Scalar>
class Adam {
 public:
  explicit Adam(const Agent<Scalar>& agent) {
    agent.visit_params([&](const auto& p) {
      m_.emplace_back(static_cast<std::size_t>(p.size()), Scalar(0));
      v_.emplace_back(static_cast<std::size_t>(p.size()), Scalar(0));
    });
  }

  void step(Agent<Scalar>& agent, AgentGrads<Scalar>& grads, double learning_rate) {
    ++t_;
    const Scalar b1 = Scalar(0.9);
    const Scalar b2 = Scalar(0.999);
    const Scalar eps = Scalar(1e-5);
    const Scalar bias1 = Scalar(1) - std::pow(b1, Scalar(t_));
    const Scalar bias2 = Scalar(1) - std::pow(b2, Scalar(t_));
    const Scalar lr = Scalar(learning_rate);

    std::vector<std::span<Scalar>> params;
    agent.visit_params([&](auto& p) { params.push_back({p.data(), static_cast<std::size_t>(p.size())}); });
    std::vector<std::span<Scalar>> gs;
    grads.visit([&](auto& g) { gs.push_back({g.data(), static_cast<std::size_t>(g.size())}); });

    for (std::size_t k = 0; k < params.size(); ++k) {
      auto& m = m_[k];
      auto& v = v_[k];
      for (std::size_t i = 0; i < params[k].size(); ++i) {
        const Scalar g = gs[k][i];
        m[i] = b1 * m[i] + (Scalar(1) - b1) * g;
        v[i] = b2 * v[i] + (Scalar(1) - b2) * g * g;
        params[k][i] -= lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + eps);
      }
    }
  }

 private:
  std::vector<std::vector<Scalar>> m_;
  std::vector<std::vector<Scalar>> v_;
  long long t_ = 0;
};

// Scale all gradients so the global L2 norm does not exceed `max_norm`.
template <typename Scalar>
Scalar clip_gradients(AgentGrads<Scalar>& grads, double max_norm) {
  Scalar sq = 0;
  grads.visit([&](auto& g) { sq += g.squaredNorm(); });
  const Scalar norm = std::sqrt(sq);
  if (norm > Scalar(max_norm)) {
    const Scalar scale = Scalar(max_norm) / norm;
    grads.visit([&](auto& g) { g *= scale; });
  }
  return norm;
}

inline void shuffle_indices(std::vector<int>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
}

template <typename Scalar>
struct UpdateStats {
  Scalar policy_loss = 0;
  Scalar value_loss = 0;
  Scalar entropy = 0;
  Scalar clip_frac = 0;
  Scalar approx_kl = 0;
};

// One PPO update: whole-batch advantage normalization, then `epochs` passes
// of shuffled minibatch gradient steps. Throws PpoDivergenceError when the
// loss turns non-finite (runaway learning rate is the usual cause).
template <typename Scalar>
UpdateStats<Scalar> ppo_update(Agent<Scalar>& agent, Adam<Scalar>& optimizer,
                               const RolloutBuffer<Scalar>& buf, const PpoConfig& cfg,
                               Rng& rng) {
  const auto gae = gae_advantages(buf, cfg.gamma, cfg.gae_lambda);

  VecX<Scalar> adv = gae.advantages;
  const Scalar mean = adv.mean();
  const Scalar stddev = std::sqrt((adv.array() - mean).square().mean());
  adv = ((adv.array() - mean) / (stddev + Scalar(1e-8))).matrix();

  const int total = static_cast<int>(buf.size());
  std::vector<int> order(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) order[static_cast<std::size_t>(i)] = i;

  UpdateStats<Scalar> stats;
  int minibatches = 0;

  const int obs_dim = static_cast<int>(buf.observations.cols());
  const int action_dim = static_cast<int>(buf.actions.cols());
  MiniBatch<Scalar> mb;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (int start = 0; start < total; start += cfg.minibatch_size) {
      const int count = std::min(cfg.minibatch_size, total - start);
      mb.observations.resize(count, obs_dim);
      mb.actions.resize(count, action_dim);
      mb.old_log_probs.resize(count);
      mb.advantages.resize(count);
      mb.returns.resize(count);
      for (int i = 0; i < count; ++i) {
        const int src = order[static_cast<std::size_t>(start + i)];
        mb.observations.row(i) = buf.observations.row(src);
        mb.actions.row(i) = buf.actions.row(src);
        mb.old_log_probs(i) = buf.log_probs(src);
        mb.advantages(i) = adv(src);
        mb.returns(i) = gae.returns(src);
      }

      auto loss = compute_loss_and_grads(agent, mb, cfg);
      if (!std::isfinite(static_cast<double>(loss.total)))
        throw PpoDivergenceError(
            "non-finite PPO loss (policy=" + std::to_string(static_cast<double>(loss.policy_loss)) +
            ", value=" + std::to_string(static_cast<double>(loss.value_loss)) +
            "); check the learning rate and reward scale");

      clip_gradients(loss.grads, cfg.grad_clip);
      optimizer.step(agent, loss.grads, cfg.learning_rate);
      for (Eigen::Index d = 0; d < agent.log_std.size(); ++d)
        agent.log_std(d) = std::clamp(agent.log_std(d), Scalar(kLogStdMin), Scalar(kLogStdMax));

      stats.policy_loss += loss.policy_loss;
      stats.value_loss += loss.value_loss;
      stats.entropy += loss.entropy;
      stats.clip_frac += loss.clip_frac;
      stats.approx_kl += loss.approx_kl;
      ++minibatches;
    }
  }

  const Scalar inv = Scalar(1) / Scalar(minibatches);
  stats.policy_loss *= inv;
  stats.value_loss *= inv;
  stats.entropy *= inv;
  stats.clip_frac *= inv;
  stats.approx_kl *= inv;
  return stats;
}

}  // namespace forestnav
