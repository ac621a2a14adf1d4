#pragma once

#include <vector>

#include "semnav/mapping/semantic_map.hpp"

namespace semnav::policy {

struct FrontierCandidate {
  Cell cell;  // component centroid snapped to the nearest member cell
  int size = 0;
};

struct FrontierSet {
  std::vector<std::vector<Cell>> components;  // 8-connected, scan order
  std::vector<FrontierCandidate> candidates;
};

/**
 * Frontier cells are explored free cells 4-adjacent to unexplored space.
 * Components are 8-connected; each yields one candidate at its centroid,
 * snapped to the nearest member cell (ties to the lowest cell index).
 */
inline FrontierSet find_frontiers(const mapping::SemanticMap& m) {
  FrontierSet out;
  const auto& explored = m.explored();
  const auto& obstacle = m.obstacle();
  const int M = m.config().size_cells;

  CellBox box = m.channel_box(mapping::kChanExplored).expanded(1).clamped(M, M);
  if (box.empty()) return out;

  auto is_frontier = [&](int x, int y) {
    if (explored.at(x, y) <= 0.0f || obstacle.at(x, y) > 0.0f) return false;
    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || nx >= M || ny < 0 || ny >= M) continue;
      if (explored.at(nx, ny) <= 0.0f) return true;
    }
    return false;
  };

  Grid2D<uint8_t> seen(box.width(), box.height(), 0);
  std::vector<Cell> stack;
  for (int y = box.y0; y <= box.y1; ++y)
    for (int x = box.x0; x <= box.x1; ++x) {
      if (seen.at(x - box.x0, y - box.y0) || !is_frontier(x, y)) continue;
      std::vector<Cell> comp;
      stack.assign(1, Cell{x, y});
      seen.at(x - box.x0, y - box.y0) = 1;
      while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        comp.push_back(c);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!dx && !dy) continue;
            int nx = c.x + dx, ny = c.y + dy;
            if (!box.contains(nx, ny)) continue;
            if (seen.at(nx - box.x0, ny - box.y0)) continue;
            if (!is_frontier(nx, ny)) continue;
            seen.at(nx - box.x0, ny - box.y0) = 1;
            stack.push_back({nx, ny});
          }
      }
      double cx = 0, cy = 0;
      for (auto c : comp) {
        cx += c.x;
        cy += c.y;
      }
      cx /= double(comp.size());
      cy /= double(comp.size());
      Cell best = comp[0];
      double best_d = 1e18;
      for (auto c : comp) {
        double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
        if (d < best_d - 1e-12 ||
            (std::abs(d - best_d) <= 1e-12 &&
             (c.y < best.y || (c.y == best.y && c.x < best.x)))) {
          best_d = d;
          best = c;
        }
      }
      out.candidates.push_back({best, int(comp.size())});
      out.components.push_back(std::move(comp));
    }
  return out;
}

/** The exploration-facing view: one (cell, size) candidate per component. */
inline std::vector<FrontierCandidate> frontier_candidates(const mapping::SemanticMap& m) {
  return find_frontiers(m).candidates;
}

}  // namespace semnav::policy
