#pragma once

#include <cmath>

#include "forestnav/mlp.hpp"
#include "forestnav/rng.hpp"

namespace forestnav {

inline constexpr int kPolicyHidden = 128;
inline constexpr int kValueHidden = 256;
inline constexpr double kLogStdInit = -0.5;
inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5*ln(2*pi)

// Diagonal-Gaussian PPO agent: an MLP mean head, a state-independent
// learnable log-std vector, and a separate value MLP.
template <typename Scalar>
struct Agent {
  Mlp<Scalar> policy;     // obs -> action mean
  VecX<Scalar> log_std;   // one entry per action dimension
  Mlp<Scalar> value;      // obs -> scalar value estimate

  Agent() = default;

  // Draws policy weights first, then value weights, from `rng`.
  Agent(int obs_dim, int action_dim, Rng& rng)
      : policy(obs_dim, kPolicyHidden, action_dim, 0.01, rng),
        log_std(VecX<Scalar>::Constant(action_dim, Scalar(kLogStdInit))),
        value(obs_dim, kValueHidden, 1, 1.0, rng) {}

  int obs_dim() const { return policy.in_dim(); }
  int action_dim() const { return policy.out_dim(); }

  // Fixed traversal order; also the checkpoint and optimizer-state order.
  template <typename Fn>
  void visit_params(Fn&& fn) {
    fn(policy.w1); fn(policy.b1);
    fn(policy.w2); fn(policy.b2);
    fn(policy.w3); fn(policy.b3);
    fn(log_std);
    fn(value.w1); fn(value.b1);
    fn(value.w2); fn(value.b2);
    fn(value.w3); fn(value.b3);
  }

  template <typename Fn>
  void visit_params(Fn&& fn) const {
    fn(policy.w1); fn(policy.b1);
    fn(policy.w2); fn(policy.b2);
    fn(policy.w3); fn(policy.b3);
    fn(log_std);
    fn(value.w1); fn(value.b1);
    fn(value.w2); fn(value.b2);
    fn(value.w3); fn(value.b3);
  }

  template <typename OtherScalar>
  Agent<OtherScalar> cast() const {
    Agent<OtherScalar> out;
    out.policy.w1 = policy.w1.template cast<OtherScalar>();
    out.policy.b1 = policy.b1.template cast<OtherScalar>();
    out.policy.w2 = policy.w2.template cast<OtherScalar>();
    out.policy.b2 = policy.b2.template cast<OtherScalar>();
    out.policy.w3 = policy.w3.template cast<OtherScalar>();
    out.policy.b3 = policy.b3.template cast<OtherScalar>();
    out.log_std = log_std.template cast<OtherScalar>();
    out.value.w1 = value.w1.template cast<OtherScalar>();
    out.value.b1 = value.b1.template cast<OtherScalar>();
    out.value.w2 = value.w2.template cast<OtherScalar>();
    out.value.b2 = value.b2.template cast<OtherScalar>();
    out.value.w3 = value.w3.template cast<OtherScalar>();
    out.value.b3 = value.b3.template cast<OtherScalar>();
    return out;
  }

  friend bool operator==(const Agent& a, const Agent& b) {
    return a.policy == b.policy && a.log_std == b.log_std && a.value == b.value;
  }
};

// Mirrors Agent's parameter layout for gradients and optimizer moments.
template <typename Scalar>
struct AgentGrads {
  typename Mlp<Scalar>::Grads policy;
  VecX<Scalar> log_std;
  typename Mlp<Scalar>::Grads value;

  static AgentGrads zero_like(const Agent<Scalar>& a) {
    AgentGrads g;
    g.policy = Mlp<Scalar>::Grads::zero_like(a.policy);
    g.log_std = VecX<Scalar>::Zero(a.log_std.size());
    g.value = Mlp<Scalar>::Grads::zero_like(a.value);
    return g;
  }

  template <typename Fn>
  void visit(Fn&& fn) {
    fn(policy.w1); fn(policy.b1);
    fn(policy.w2); fn(policy.b2);
    fn(policy.w3); fn(policy.b3);
    fn(log_std);
    fn(value.w1); fn(value.b1);
    fn(value.w2); fn(value.b2);
    fn(value.w3); fn(value.b3);
  }
};

// log N(action; mean, diag(exp(log_std))^2), summed over dimensions.
template <typename Scalar>
Scalar gaussian_log_prob(const RowX<Scalar>& mean, const VecX<Scalar>& log_std,
                         const RowX<Scalar>& action) {
  Scalar lp = 0;
  for (int d = 0; d < mean.cols(); ++d) {
    const Scalar sigma = std::exp(log_std(d));
    const Scalar z = (action(d) - mean(d)) / sigma;
    lp += Scalar(-0.5) * z * z - log_std(d) - Scalar(kHalfLog2Pi);
  }
  return lp;
}

// Differential entropy of the diagonal Gaussian (state-independent).
template <typename Scalar>
Scalar gaussian_entropy(const VecX<Scalar>& log_std) {
  Scalar h = 0;
  for (int d = 0; d < log_std.size(); ++d)
    h += log_std(d) + Scalar(0.5) + Scalar(kHalfLog2Pi);
  return h;
}

}  // namespace forestnav
