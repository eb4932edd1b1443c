#pragma once

#include <cmath>

namespace forestnav {

// Planar vector. Used for positions [m], velocities [m/s] and
// accelerations [m/s^2]; components are expected to stay finite.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm_squared() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm_squared()); }
};

}  // namespace forestnav
