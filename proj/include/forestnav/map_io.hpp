#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "forestnav/forest.hpp"

namespace forestnav {

inline void to_json(nlohmann::json& j, const ForestConfig& c) {
  j = nlohmann::json{{"cell_side", c.cell_side},
                     {"trees_per_grid_range", {c.trees_per_grid_min, c.trees_per_grid_max}},
                     {"tree_radius_range", {c.tree_radius_min, c.tree_radius_max}},
                     {"trees_min_distance", c.trees_min_distance},
                     {"start_clearance", c.start_clearance},
                     {"grid_extent", c.grid_extent},
                     {"per_cell_tree_count", c.per_cell_tree_count},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, ForestConfig& c) {
  j.at("cell_side").get_to(c.cell_side);
  c.trees_per_grid_min = j.at("trees_per_grid_range").at(0).get<int>();
  c.trees_per_grid_max = j.at("trees_per_grid_range").at(1).get<int>();
  c.tree_radius_min = j.at("tree_radius_range").at(0).get<double>();
  c.tree_radius_max = j.at("tree_radius_range").at(1).get<double>();
  j.at("trees_min_distance").get_to(c.trees_min_distance);
  j.at("start_clearance").get_to(c.start_clearance);
  j.at("grid_extent").get_to(c.grid_extent);
  j.at("per_cell_tree_count").get_to(c.per_cell_tree_count);
  j.at("seed").get_to(c.seed);
}

// Map file: {"config": ..., "cells": [[{"cx","cy","r"}, ...], ...]} with
// row-major cells and shortest-round-trip decimals, so save/load is
// lossless.
inline nlohmann::json map_to_json(const ForestMap& map) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : map.cells()) {
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& t : cell)
      trees.push_back({{"cx", t.center.x}, {"cy", t.center.y}, {"r", t.radius}});
    cells.push_back(std::move(trees));
  }
  return nlohmann::json{{"config", map.config()}, {"cells", std::move(cells)}};
}

inline ForestMap map_from_json(const nlohmann::json& j) {
  ForestConfig cfg = j.at("config").get<ForestConfig>();
  std::vector<std::vector<Tree>> cells;
  for (const auto& cell : j.at("cells")) {
    std::vector<Tree> trees;
    for (const auto& t : cell)
      trees.push_back(
          {{t.at("cx").get<double>(), t.at("cy").get<double>()}, t.at("r").get<double>()});
    cells.push_back(std::move(trees));
  }
  const std::size_t expected =
      static_cast<std::size_t>(cfg.grid_extent) * static_cast<std::size_t>(cfg.grid_extent);
  if (cells.size() != expected)
    throw std::runtime_error("map file cell count does not match grid_extent");
  return ForestMap(cfg, std::move(cells));
}

inline void save_map(const ForestMap& map, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write map file: " + path);
  os << map_to_json(map).dump(1) << "\n";
  if (!os) throw std::runtime_error("map write failed: " + path);
}

inline ForestMap load_map(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open map file: " + path);
  return map_from_json(nlohmann::json::parse(is));
}

}  // namespace forestnav
