#pragma once

#include <algorithm>
#include <cmath>

#include "forestnav/vec2.hpp"

namespace forestnav {

struct KinematicsConfig {
  double dt = 0.1;       // simulation step [s]
  double max_acc = 3.0;  // acceleration clamp [m/s^2]
  double v_max = 2.0;    // commanded-speed bound [m/s]
};

struct DroneState {
  Vec2 position;  // [m]
  Vec2 velocity;  // [m/s]
};

// a = (v_req - v0) / dt, clamped to [-max_acc, max_acc].
inline double compute_acceleration(double v_req, double v0, const KinematicsConfig& cfg) {
  return std::clamp((v_req - v0) / cfg.dt, -cfg.max_acc, cfg.max_acc);
}

namespace detail {

struct AxisStep {
  double velocity;
  double position;
};

inline AxisStep step_axis(double x0, double v0, double v_req, const KinematicsConfig& cfg) {
  const double raw = (v_req - v0) / cfg.dt;
  double a;
  double v;
  if (std::abs(raw) <= cfg.max_acc) {
    // Unclamped acceleration lands on the commanded speed by construction;
    // assigning v_req directly keeps the landing exact in floating point.
    a = raw;
    v = v_req;
  } else {
    a = std::copysign(cfg.max_acc, raw);
    v = v0 + a * cfg.dt;
    // Rounding can push v a few ulps past v_req; tie off so the approach
    // toward the commanded speed is monotone.
    if ((raw > 0.0 && v > v_req) || (raw < 0.0 && v < v_req)) v = v_req;
  }
  // Position advances with the *updated* velocity plus the half-step
  // acceleration term. During acceleration this adds a*dt^2/2 beyond exact
  // constant-acceleration integration; intentional, the model is kept
  // verbatim from its calibrated form.
  const double x = x0 + v * cfg.dt + 0.5 * a * cfg.dt * cfg.dt;
  return {v, x};
}

}  // namespace detail

// Advance one step toward the commanded velocity, each axis independent.
inline DroneState step(const DroneState& state, Vec2 v_req, const KinematicsConfig& cfg) {
  const auto sx = detail::step_axis(state.position.x, state.velocity.x, v_req.x, cfg);
  const auto sy = detail::step_axis(state.position.y, state.velocity.y, v_req.y, cfg);
  return {{sx.position, sy.position}, {sx.velocity, sy.velocity}};
}

}  // namespace forestnav
