#pragma once

#include "semnav/core/morphology.hpp"

namespace semnav::planning {

/**
 * Binary traversability from a map obstacle channel: a cell is blocked iff
 * any obstacle cell lies within the Euclidean radius (in cells). Unexplored
 * cells carry no obstacle and therefore stay traversable, which is what lets
 * the planner chase goals beyond the known map.
 */
template <class T>
inline Grid2D<uint8_t> inflate_obstacles(const Grid2D<T>& obstacle_channel,
                                         double radius_cells) {
  Grid2D<uint8_t> traversable(obstacle_channel.width(), obstacle_channel.height(), 1);
  const auto& offs = disk_offsets(radius_cells);
  for (int y = 0; y < obstacle_channel.height(); ++y)
    for (int x = 0; x < obstacle_channel.width(); ++x) {
      if (!(obstacle_channel.at(x, y) > 0)) continue;
      for (auto o : offs) {
        int nx = x + o.x, ny = y + o.y;
        if (traversable.in_bounds(nx, ny)) traversable.at(nx, ny) = 0;
      }
    }
  return traversable;
}

}  // namespace semnav::planning
