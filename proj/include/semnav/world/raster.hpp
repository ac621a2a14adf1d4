#pragma once

#include <cmath>
#include <cstdint>

#include "semnav/core/error.hpp"
#include "semnav/core/grid.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::world {

/**
 * Ground-truth raster of a scene: an obstacle plane plus one bit per
 * category. Cell (i, j) covers [i*cell, (i+1)*cell) x [j*cell, (j+1)*cell)
 * in scene coordinates. Rasterization is conservative: any positive-area
 * overlap marks the cell.
 */
struct GroundTruthGrid {
  int cells_x = 0;
  int cells_y = 0;
  double cell_m = kCellM;
  Grid2D<uint8_t> obstacle;
  Grid2D<uint16_t> categories;  // bit c set = category c present

  bool in_bounds(int x, int y) const { return obstacle.in_bounds(x, y); }
  Cell cell_of(Vec2 p) const {
    return {int(std::floor(p.x / cell_m)), int(std::floor(p.y / cell_m))};
  }
  Vec2 cell_center(Cell c) const {
    return {(c.x + 0.5) * cell_m, (c.y + 0.5) * cell_m};
  }
  bool category_at(Cell c, int cat) const {
    return in_bounds(c.x, c.y) && (categories.at(c) >> cat & 1u);
  }
};

namespace detail {
// Inclusive cell index range covered by [lo, hi) with a 1 nm tolerance that
// swallows measure-zero touches and double rounding on 5 cm multiples.
inline std::pair<int, int> cell_span(double lo, double hi, double cell, int n) {
  constexpr double tol = 1e-9;
  int a = int(std::floor((lo + tol) / cell));
  int b = int(std::floor((hi - tol) / cell));
  return {std::max(a, 0), std::min(b, n - 1)};
}
}  // namespace detail

inline GroundTruthGrid rasterize_scene(const Scene& scene, double cell_m = kCellM,
                                       int max_cells = 4096) {
  require(cell_m > 0, "cell size must be positive");
  int nx = int(std::ceil(scene.width_m / cell_m - 1e-9));
  int ny = int(std::ceil(scene.height_m / cell_m - 1e-9));
  if (nx > max_cells || ny > max_cells)
    throw Error(format_msg("scene extent overflows raster: requires M=%d (max %d)",
                           std::max(nx, ny), max_cells));

  GroundTruthGrid g;
  g.cells_x = nx;
  g.cells_y = ny;
  g.cell_m = cell_m;
  g.obstacle = Grid2D<uint8_t>(nx, ny, 0);
  g.categories = Grid2D<uint16_t>(nx, ny, 0);

  for (const auto& w : scene.walls) {
    if (w.height < kObstacleHeightM) continue;
    if (w.vertical()) {
      int col = std::clamp(int(std::floor(w.x0 / cell_m)), 0, nx - 1);
      auto [r0, r1] = detail::cell_span(std::min(w.y0, w.y1), std::max(w.y0, w.y1),
                                        cell_m, ny);
      for (int r = r0; r <= r1; ++r) g.obstacle.at(col, r) = 1;
    } else {
      int row = std::clamp(int(std::floor(w.y0 / cell_m)), 0, ny - 1);
      auto [c0, c1] = detail::cell_span(std::min(w.x0, w.x1), std::max(w.x0, w.x1),
                                        cell_m, nx);
      for (int c = c0; c <= c1; ++c) g.obstacle.at(c, row) = 1;
    }
  }

  for (const auto& o : scene.objects) {
    auto [c0, c1] = detail::cell_span(o.footprint.x0, o.footprint.x1, cell_m, nx);
    auto [r0, r1] = detail::cell_span(o.footprint.y0, o.footprint.y1, cell_m, ny);
    bool blocks = o.height >= kObstacleHeightM;
    uint16_t bit = uint16_t(1u << o.category);
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c) {
        if (blocks) g.obstacle.at(c, r) = 1;
        g.categories.at(c, r) = uint16_t(g.categories.at(c, r) | bit);
      }
  }
  return g;
}

}  // namespace semnav::world
