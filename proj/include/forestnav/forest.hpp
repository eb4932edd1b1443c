#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "forestnav/rng.hpp"
#include "forestnav/vec2.hpp"

namespace forestnav {

struct Tree {
  Vec2 center;    // [m]
  double radius;  // [m]

  friend bool operator==(const Tree&, const Tree&) = default;
};

struct ForestConfig {
  double cell_side = 16.6;          // [m]; keep >= lidar range + max tree radius
  int trees_per_grid_min = 30;      // inclusive target-count range per cell
  int trees_per_grid_max = 60;
  double tree_radius_min = 0.1;     // [m]
  double tree_radius_max = 0.6;
  double trees_min_distance = 1.5;  // center-to-center [m]
  double start_clearance = 2.0;     // tree-free disc around the origin [m]
  int grid_extent = 7;              // cells per side, grid centered on origin
  bool per_cell_tree_count = false; // redraw the target count for every cell
  std::uint64_t seed = 0;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

// Circular trees bucketed into a uniform grid. Immutable after construction;
// concurrent reads are safe.
class ForestMap {
 public:
  ForestMap(ForestConfig config, std::vector<std::vector<Tree>> cells)
      : config_(config), cells_(std::move(cells)) {}

  const ForestConfig& config() const { return config_; }
  int extent() const { return config_.grid_extent; }

  // World coordinate of the grid's low edge.
  double grid_origin() const { return -0.5 * config_.grid_extent * config_.cell_side; }

  int cell_index_of(double coord) const {
    const int i = static_cast<int>(std::floor((coord - grid_origin()) / config_.cell_side));
    return std::clamp(i, 0, config_.grid_extent - 1);
  }

  const std::vector<Tree>& cell(int ix, int iy) const {
    return cells_[static_cast<std::size_t>(iy) * config_.grid_extent + ix];
  }

  // Visit the 3x3 cell block around `position`, clamped at the border.
  // Cells in row-major order, trees in insertion order.
  template <typename Fn>
  void for_each_neighborhood_tree(Vec2 position, Fn&& fn) const {
    const int ix = cell_index_of(position.x);
    const int iy = cell_index_of(position.y);
    for (int jy = std::max(0, iy - 1); jy <= std::min(config_.grid_extent - 1, iy + 1); ++jy) {
      for (int jx = std::max(0, ix - 1); jx <= std::min(config_.grid_extent - 1, ix + 1); ++jx) {
        for (const Tree& t : cell(jx, jy)) fn(t);
      }
    }
  }

  std::size_t tree_count() const {
    std::size_t n = 0;
    for (const auto& c : cells_) n += c.size();
    return n;
  }

  const std::vector<std::vector<Tree>>& cells() const { return cells_; }

  friend bool operator==(const ForestMap&, const ForestMap&) = default;

 private:
  ForestConfig config_;
  std::vector<std::vector<Tree>> cells_;  // row-major, extent * extent
};

// Rejection-sampled tree placement. Each cell consumes its own RNG substream
// (stream id = linear cell index) so the generated map does not depend on
// cell iteration order of the draws; stream id extent^2 holds the per-map
// target-count draw. A candidate is rejected when its center lies within
// trees_min_distance of any tree already placed in the same or a neighboring
// cell, or when its disc intersects the start clearance around the origin.
// After 1000 consecutive rejections the cell is finalized with fewer trees.
inline ForestMap generate(const ForestConfig& config) {
  const int n = config.grid_extent;
  const double origin = -0.5 * n * config.cell_side;
  std::vector<std::vector<Tree>> cells(static_cast<std::size_t>(n) * n);

  int shared_target = 0;
  if (!config.per_cell_tree_count) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(n) * n));
    shared_target = static_cast<int>(
        rng.uniform_int(config.trees_per_grid_min, config.trees_per_grid_max));
  }

  const double min_dist_sq = config.trees_min_distance * config.trees_min_distance;

  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
      Rng rng(derive_seed(config.seed, idx));
      const int target =
          config.per_cell_tree_count
              ? static_cast<int>(rng.uniform_int(config.trees_per_grid_min, config.trees_per_grid_max))
              : shared_target;

      const double x0 = origin + ix * config.cell_side;
      const double y0 = origin + iy * config.cell_side;

      auto& cell = cells[idx];
      for (int slot = 0; slot < target; ++slot) {
        bool placed = false;
        for (int trial = 0; trial < 1000; ++trial) {
          Tree cand;
          cand.center.x = rng.uniform(x0, x0 + config.cell_side);
          cand.center.y = rng.uniform(y0, y0 + config.cell_side);
          cand.radius = rng.uniform(config.tree_radius_min, config.tree_radius_max);

          // Rounding at the cell edge could land the draw one cell over;
          // treat that as a rejection so storage cell == cell_of(center).
          const auto cell_of = [&](double c) {
            return std::clamp(static_cast<int>(std::floor((c - origin) / config.cell_side)), 0, n - 1);
          };
          if (cell_of(cand.center.x) != ix || cell_of(cand.center.y) != iy) continue;

          if (cand.center.norm() < cand.radius + config.start_clearance) continue;

          bool too_close = false;
          for (int jy = std::max(0, iy - 1); jy <= std::min(n - 1, iy + 1) && !too_close; ++jy) {
            for (int jx = std::max(0, ix - 1); jx <= std::min(n - 1, ix + 1) && !too_close; ++jx) {
              for (const Tree& t : cells[static_cast<std::size_t>(jy) * n + jx]) {
                if ((t.center - cand.center).norm_squared() < min_dist_sq) {
                  too_close = true;
                  break;
                }
              }
            }
          }
          if (too_close) continue;

          cell.push_back(cand);
          placed = true;
          break;
        }
        if (!placed) break;  // cutoff: accept a sparser cell
      }
    }
  }

  return ForestMap(config, std::move(cells));
}

// Trees of the 3x3 cell block centered on the drone's cell.
inline std::vector<Tree> neighborhood_trees(const ForestMap& map, Vec2 position) {
  std::vector<Tree> out;
  map.for_each_neighborhood_tree(position, [&](const Tree& t) { out.push_back(t); });
  return out;
}

// Signed distance from the drone's disc to the nearest tree surface among
// the neighborhood trees; negative means penetration, +inf means no tree in
// range of the 3x3 block.
inline double collision_check(const ForestMap& map, Vec2 position, double drone_radius) {
  double nearest = std::numeric_limits<double>::infinity();
  map.for_each_neighborhood_tree(position, [&](const Tree& t) {
    const double d = (position - t.center).norm() - t.radius - drone_radius;
    nearest = std::min(nearest, d);
  });
  return nearest;
}

}  // namespace forestnav
