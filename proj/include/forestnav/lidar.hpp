#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "forestnav/forest.hpp"
#include "forestnav/vec2.hpp"

namespace forestnav {

struct LidarConfig {
  double max_range = 16.0;   // [m]
  int beam_count = 1600;     // 360 deg / 0.225 deg
  double angle_offset = 0.0; // beam 0 direction relative to world +X [rad]
};

struct LidarScan {
  std::vector<double> distances;  // one entry per beam, in (0, max_range]
};

inline double beam_angle(const LidarConfig& cfg, int k) {
  const double pitch = 2.0 * 3.14159265358979323846 / cfg.beam_count;
  return cfg.angle_offset + k * pitch;
}

inline Vec2 beam_direction(const LidarConfig& cfg, int k) {
  const double a = beam_angle(cfg, k);
  return {std::cos(a), std::sin(a)};
}

// Nearest intersection of the ray {origin + t*direction, t >= 0} with the
// circle whose center sits at `origin_to_center` relative to the ray origin.
// Solves t^2 - 2 t (d.m) + |m|^2 - r^2 = 0 and keeps the smaller nonnegative
// root; the larger root applies only when the origin is inside the circle.
// Returns nullopt when the circle is missed or lies behind the ray.
inline std::optional<double> ray_circle_distance(Vec2 origin_to_center, double radius,
                                                 Vec2 direction) {
  const double b = direction.dot(origin_to_center);
  const double c = origin_to_center.norm_squared() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  const double t_near = b - s;
  if (t_near >= 0.0) return t_near;
  const double t_far = b + s;
  if (t_far >= 0.0) return t_far;
  return std::nullopt;
}

// Full 360-degree sweep against the neighborhood trees, written into `out`
// (resized to beam_count). Misses and hits beyond max_range report exactly
// max_range.
//
// Per tree, only the beams inside the angular cone subtended by the circle
// can hit (|sin(theta)| <= r/|m| and cos(theta) > 0), so the sweep visits
// just that index window, padded by two beams to absorb the rounding of
// atan2/asin. Skipped (beam, tree) pairs are strict misses or land beyond
// max_range, and visited pairs run the same ray_circle_distance call a full
// per-beam loop would, so the result matches the unfiltered scan bit for bit.
inline void scan_into(const ForestMap& map, Vec2 drone_position, const LidarConfig& cfg,
                      std::vector<double>& out) {
  const int n = cfg.beam_count;
  out.assign(static_cast<std::size_t>(n), cfg.max_range);
  const double pitch = 2.0 * 3.14159265358979323846 / n;

  map.for_each_neighborhood_tree(drone_position, [&](const Tree& tree) {
    const Vec2 m = tree.center - drone_position;
    const double dist = m.norm();
    // Entry distance is at least |m| - r; 1e-3 m of slack dwarfs any
    // floating-point error in the quadratic at map scale.
    if (dist - tree.radius > cfg.max_range + 1e-3) return;

    int k_lo;
    int k_hi;
    if (dist <= tree.radius) {
      k_lo = 0;  // origin inside the disc: every beam hits
      k_hi = n - 1;
    } else {
      const double center_angle = std::atan2(m.y, m.x);
      const double half_width = std::asin(std::min(1.0, tree.radius / dist));
      k_lo = static_cast<int>(std::floor((center_angle - half_width - cfg.angle_offset) / pitch)) - 2;
      k_hi = static_cast<int>(std::ceil((center_angle + half_width - cfg.angle_offset) / pitch)) + 2;
      if (k_hi - k_lo + 1 > n) {  // degenerate when beam_count is tiny
        k_lo = 0;
        k_hi = n - 1;
      }
    }
    for (int k = k_lo; k <= k_hi; ++k) {
      const int kk = ((k % n) + n) % n;
      if (const auto t = ray_circle_distance(m, tree.radius, beam_direction(cfg, kk))) {
        if (*t < out[kk]) out[kk] = *t;
      }
    }
  });
}

inline LidarScan scan(const ForestMap& map, Vec2 drone_position, const LidarConfig& cfg) {
  LidarScan s;
  scan_into(map, drone_position, cfg, s.distances);
  return s;
}

}  // namespace forestnav
