#pragma once

#include <algorithm>
#include <cmath>

namespace semnav {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/** Planar agent state: position in meters, heading in radians (0 = east, CCW+). */
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  bool operator==(const Pose&) const = default;
  Vec2 position() const { return {x, y}; }
  Vec2 forward() const { return {std::cos(theta), std::sin(theta)}; }
};

/** Normalize an angle to (-pi, pi]. */
inline double wrap_angle(double a) {
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

/** Axis-aligned rectangle, closed on all sides. */
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool operator==(const Rect&) const = default;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }

  bool contains(Vec2 p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  bool contains_open(Vec2 p) const {
    return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1;
  }
  /** Positive-area overlap; shared edges do not count. */
  bool overlaps_open(const Rect& o) const {
    return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
  }
  Rect expanded(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }

  /** Euclidean distance from p to the rectangle (0 when inside). */
  double distance_to(Vec2 p) const {
    double dx = std::max({x0 - p.x, 0.0, p.x - x1});
    double dy = std::max({y0 - p.y, 0.0, p.y - y1});
    return std::sqrt(dx * dx + dy * dy);
  }
};

/** Integer grid cell coordinate. */
struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

}  // namespace semnav
