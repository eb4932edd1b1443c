#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "forestnav/forest.hpp"

namespace forestnav {

namespace detail {

// Fixed three-decimal formatting keeps the SVG byte-deterministic.
inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace detail

// Static top-down picture of a mission: trees as circles, the flown path as
// a single polyline, a cross at the start point and a vertical line at the
// goal distance. World y is flipped so +y points up in the image.
inline std::string render_map_svg(const ForestMap& map, const std::vector<Vec2>& path,
                                  double goal_x) {
  using detail::svg_num;

  double min_x = -2.0, max_x = goal_x + 2.0, min_y = -10.0, max_y = 10.0;
  const double half = 0.5 * map.extent() * map.config().cell_side;
  min_x = std::min(min_x, -half);
  max_x = std::max(max_x, half);
  for (const Vec2& p : path) {
    min_x = std::min(min_x, p.x - 2.0);
    max_x = std::max(max_x, p.x + 2.0);
    min_y = std::min(min_y, -p.y - 2.0);
    max_y = std::max(max_y, -p.y + 2.0);
  }
  min_y = std::min(min_y, -half);
  max_y = std::max(max_y, half);

  const double w = max_x - min_x;
  const double h = max_y - min_y;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + svg_num(min_x) + " " +
         svg_num(min_y) + " " + svg_num(w) + " " + svg_num(h) + "\" width=\"" +
         svg_num(w * 8.0) + "\" height=\"" + svg_num(h * 8.0) + "\">\n";
  svg += "<rect x=\"" + svg_num(min_x) + "\" y=\"" + svg_num(min_y) + "\" width=\"" + svg_num(w) +
         "\" height=\"" + svg_num(h) + "\" fill=\"white\"/>\n";

  for (const auto& cell : map.cells()) {
    for (const Tree& t : cell) {
      svg += "<circle cx=\"" + svg_num(t.center.x) + "\" cy=\"" + svg_num(-t.center.y) +
             "\" r=\"" + svg_num(t.radius) + "\" fill=\"#2d6a2d\"/>\n";
    }
  }

  svg += "<line x1=\"" + svg_num(goal_x) + "\" y1=\"" + svg_num(min_y) + "\" x2=\"" +
         svg_num(goal_x) + "\" y2=\"" + svg_num(max_y) +
         "\" stroke=\"#888888\" stroke-width=\"0.15\" stroke-dasharray=\"1,1\"/>\n";

  if (!path.empty()) {
    svg += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.12\" points=\"";
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) svg += " ";
      svg += svg_num(path[i].x) + "," + svg_num(-path[i].y);
    }
    svg += "\"/>\n";
    const Vec2 s = path.front();
    svg += "<path d=\"M " + svg_num(s.x - 0.5) + " " + svg_num(-s.y) + " L " + svg_num(s.x + 0.5) +
           " " + svg_num(-s.y) + " M " + svg_num(s.x) + " " + svg_num(-s.y - 0.5) + " L " +
           svg_num(s.x) + " " + svg_num(-s.y + 0.5) +
           "\" stroke=\"#2980b9\" stroke-width=\"0.12\"/>\n";
  }

  svg += "</svg>\n";
  return svg;
}

inline void write_map_svg(const ForestMap& map, const std::vector<Vec2>& path, double goal_x,
                          const std::string& out_path) {
  std::ofstream os(out_path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write svg: " + out_path);
  os << render_map_svg(map, path, goal_x);
  if (!os) throw std::runtime_error("svg write failed: " + out_path);
}

}  // namespace forestnav
