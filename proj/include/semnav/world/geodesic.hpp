#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "semnav/core/morphology.hpp"
#include "semnav/world/raster.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::world {

inline constexpr double kInfDist = std::numeric_limits<double>::infinity();

namespace geo_detail {

struct Move {
  int dx, dy;
  double cost;       // in cells
  int px1, py1;      // cells a knight move passes through (relative)
  int px2, py2;
};

/** 16-connected neighborhood with exact Euclidean edge lengths. Knight moves
 *  sweep two cells and require them free; diagonal moves may touch a corner
 *  vertex, matching what a point path through cell centers can do. */
inline const std::vector<Move>& moves16() {
  static const std::vector<Move> m = [] {
    std::vector<Move> v;
    const double r2 = std::sqrt(2.0), r5 = std::sqrt(5.0);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        v.push_back({dx, dy, (dx && dy) ? r2 : 1.0, 0, 0, 0, 0});
      }
    // Knight moves. They pass through two cells that must both be free.
    const int k[8][2] = {{1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}};
    for (auto& kk : k) {
      int dx = kk[0], dy = kk[1];
      int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
      Move mv{dx, dy, r5, 0, 0, 0, 0};
      if (std::abs(dx) == 2) {
        mv.px1 = sx; mv.py1 = 0;
        mv.px2 = sx; mv.py2 = sy;
      } else {
        mv.px1 = 0; mv.py1 = sy;
        mv.px2 = sx; mv.py2 = sy;
      }
      v.push_back(mv);
    }
    return v;
  }();
  return m;
}

}  // namespace geo_detail

/**
 * Cells within `radius_cells` of any seed become passable. Object footprints
 * sit inside their own inflation shell, so paths to them must be allowed to
 * cross it; the motion planner applies the same clearance when it navigates
 * toward goal cells, keeping the oracle and the planner consistent.
 */
inline Grid2D<uint8_t> clear_around_seeds(const Grid2D<uint8_t>& traversable,
                                          const std::vector<Cell>& seeds,
                                          double radius_cells) {
  Grid2D<uint8_t> out = traversable;
  const auto& offs = disk_offsets(radius_cells);
  for (auto s : seeds)
    for (auto o : offs) {
      int nx = s.x + o.x, ny = s.y + o.y;
      if (out.in_bounds(nx, ny)) out.at(nx, ny) = 1;
    }
  return out;
}

/** Clearance used when planning or measuring distance to an object footprint. */
inline constexpr double kGoalApproachClearanceCells = kAgentRadiusM / kCellM + 1.0;

/**
 * Multi-source Dijkstra over a traversability grid (1 = passable) on the
 * 16-connected neighborhood. Seed cells start at zero even when blocked, so
 * distances measure approach to object footprints. Returns meters.
 */
inline Grid2D<double> dijkstra_field(const Grid2D<uint8_t>& traversable,
                                     const std::vector<Cell>& seeds, double cell_m,
                                     double seed_clearance_cells = 0.0) {
  const int w = traversable.width(), h = traversable.height();
  Grid2D<uint8_t> pass =
      seed_clearance_cells > 0.0 ? clear_around_seeds(traversable, seeds, seed_clearance_cells)
                                 : traversable;
  Grid2D<double> dist(w, h, kInfDist);
  using QItem = std::pair<double, int>;  // (distance cells, flat index)
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> q;
  for (auto s : seeds) {
    if (!pass.in_bounds(s)) continue;
    if (dist.at(s) > 0.0) {
      dist.at(s) = 0.0;
      q.push({0.0, s.y * w + s.x});
    }
  }
  const auto& moves = geo_detail::moves16();
  while (!q.empty()) {
    auto [d, idx] = q.top();
    q.pop();
    int x = idx % w, y = idx / w;
    if (d > dist.at(x, y)) continue;  // stale entry
    for (const auto& m : moves) {
      int nx = x + m.dx, ny = y + m.dy;
      if (!pass.in_bounds(nx, ny) || !pass.at(nx, ny)) continue;
      if (m.cost > 2.0) {  // knight move: swept cells must be free
        int ax = x + m.px1, ay = y + m.py1, bx = x + m.px2, by = y + m.py2;
        if (!pass.in_bounds(ax, ay) || !pass.at(ax, ay)) continue;
        if (!pass.in_bounds(bx, by) || !pass.at(bx, by)) continue;
      }
      double nd = d + m.cost;
      if (nd < dist.at(nx, ny)) {
        dist.at(nx, ny) = nd;
        q.push({nd, ny * w + nx});
      }
    }
  }
  for (size_t i = 0; i < dist.size(); ++i)
    if (std::isfinite(dist[i])) dist[i] *= cell_m;
  return dist;
}

/**
 * Shortest-path oracle for one scene: ground-truth raster inflated by the
 * agent radius, queried with multi-source Dijkstra. Immutable once built.
 */
class GeodesicOracle {
 public:
  explicit GeodesicOracle(const Scene& scene, double cell_m = kCellM,
                          double agent_radius_m = kAgentRadiusM)
      : gt_(rasterize_scene(scene, cell_m)), cell_m_(cell_m) {
    auto blocked = dilate_disk(gt_.obstacle, agent_radius_m / cell_m);
    traversable_ = Grid2D<uint8_t>(gt_.cells_x, gt_.cells_y, 0);
    for (size_t i = 0; i < blocked.size(); ++i) traversable_[i] = blocked[i] ? 0 : 1;
  }

  const GroundTruthGrid& ground_truth() const { return gt_; }
  const Grid2D<uint8_t>& traversable() const { return traversable_; }

  Grid2D<double> field_from(const std::vector<Cell>& seeds) const {
    return dijkstra_field(traversable_, seeds, cell_m_);
  }

  /** Field seeded at every cell of every instance of a category. */
  Grid2D<double> field_from_category(int category) const {
    std::vector<Cell> seeds;
    for (int y = 0; y < gt_.cells_y; ++y)
      for (int x = 0; x < gt_.cells_x; ++x)
        if (gt_.categories.at(x, y) >> category & 1u) seeds.push_back({x, y});
    return dijkstra_field(traversable_, seeds, cell_m_, kGoalApproachClearanceCells);
  }

  /**
   * Precompute and cache fields for all categories. Call once before sharing
   * the oracle across threads; cached_category_field never mutates after.
   */
  void precompute_category_fields() {
    if (!category_fields_.empty()) return;
    category_fields_.reserve(kNumCategories);
    for (int c = 0; c < kNumCategories; ++c)
      category_fields_.push_back(field_from_category(c));
  }

  const Grid2D<double>& cached_category_field(int category) const {
    require(!category_fields_.empty(),
            "GeodesicOracle: call precompute_category_fields() first");
    return category_fields_[size_t(category)];
  }

  double distance(Vec2 a, Vec2 b) const {
    auto f = field_from({gt_.cell_of(a)});
    Cell cb = gt_.cell_of(b);
    if (!gt_.in_bounds(cb.x, cb.y)) return kInfDist;
    return f.at(cb);
  }

 private:
  GroundTruthGrid gt_;
  Grid2D<uint8_t> traversable_;
  std::vector<Grid2D<double>> category_fields_;
  double cell_m_;
};

/** Geodesic distance between two points; infinite when unreachable. */
inline double geodesic_distance(const Scene& scene, Vec2 a, Vec2 b,
                                double agent_radius_m = kAgentRadiusM) {
  require(scene.contains(a) && scene.contains(b), "geodesic endpoints must be in extent");
  return GeodesicOracle(scene, kCellM, agent_radius_m).distance(a, b);
}

}  // namespace semnav::world
