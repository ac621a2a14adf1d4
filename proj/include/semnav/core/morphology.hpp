#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "semnav/core/grid.hpp"

namespace semnav {

/** Integer offsets within Euclidean distance `radius` of the origin. */
inline const std::vector<Cell>& disk_offsets(double radius) {
  // Memoized per distinct radius; the library only ever uses a handful.
  static thread_local std::vector<std::pair<double, std::vector<Cell>>> cache;
  for (auto& [r, offs] : cache)
    if (r == radius) return offs;
  std::vector<Cell> offs;
  int ir = int(std::floor(radius));
  for (int dy = -ir; dy <= ir; ++dy)
    for (int dx = -ir; dx <= ir; ++dx)
      if (double(dx) * dx + double(dy) * dy <= radius * radius + 1e-12)
        offs.push_back({dx, dy});
  cache.emplace_back(radius, std::move(offs));
  return cache.back().second;
}

/** Binary dilation with a Euclidean disk; cells outside the grid are 0. */
inline Grid2D<uint8_t> dilate_disk(const Grid2D<uint8_t>& g, double radius) {
  Grid2D<uint8_t> out(g.width(), g.height(), 0);
  const auto& offs = disk_offsets(radius);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      if (!g.at(x, y)) continue;
      for (auto o : offs) {
        int nx = x + o.x, ny = y + o.y;
        if (out.in_bounds(nx, ny)) out.at(nx, ny) = 1;
      }
    }
  return out;
}

/** Binary erosion with a Euclidean disk; outside the grid counts as occupied
 *  so that closing is neutral at image borders. */
inline Grid2D<uint8_t> erode_disk(const Grid2D<uint8_t>& g, double radius) {
  Grid2D<uint8_t> out(g.width(), g.height(), 0);
  const auto& offs = disk_offsets(radius);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      bool keep = g.at(x, y) != 0;
      for (auto it = offs.begin(); keep && it != offs.end(); ++it) {
        int nx = x + it->x, ny = y + it->y;
        keep = !g.in_bounds(nx, ny) || g.at(nx, ny);
      }
      out.at(x, y) = keep ? 1 : 0;
    }
  return out;
}

inline Grid2D<uint8_t> morph_open(const Grid2D<uint8_t>& g, double radius) {
  if (radius <= 0.0) return g;
  return dilate_disk(erode_disk(g, radius), radius);
}

inline Grid2D<uint8_t> morph_close(const Grid2D<uint8_t>& g, double radius) {
  if (radius <= 0.0) return g;
  return erode_disk(dilate_disk(g, radius), radius);
}

}  // namespace semnav
