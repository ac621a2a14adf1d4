#pragma once

#include <vector>

#include "semnav/core/rng.hpp"
#include "semnav/world/geodesic.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::world {

struct EpisodeSampleParams {
  double min_goal_dist_m = 1.5;
  double max_goal_dist_m = 30.0;
  int max_attempts = 400;
};

/**
 * Uniform start cell over clearance-checked free space, uniform goal over
 * goal-eligible categories present in the scene, rejected until the geodesic
 * start-to-goal distance lands in [min, max].
 */
inline EpisodeSpec sample_episode(const Scene& scene, const GeodesicOracle& oracle,
                                  uint64_t rng_seed,
                                  const EpisodeSampleParams& p = {}) {
  const auto& gt = oracle.ground_truth();
  const auto& free = oracle.traversable();

  std::vector<Cell> free_cells;
  for (int y = 0; y < gt.cells_y; ++y)
    for (int x = 0; x < gt.cells_x; ++x)
      if (free.at(x, y)) free_cells.push_back({x, y});
  require(!free_cells.empty(), "sample_episode: scene has no free space");

  std::vector<int> goal_cats;
  for (int g = 0; g < kNumGoalCategories; ++g) {
    bool present = false;
    for (const auto& o : scene.objects)
      if (o.category == g) { present = true; break; }
    if (present) goal_cats.push_back(g);
  }
  require(!goal_cats.empty(), "sample_episode: no goal-eligible category present");

  Rng rng = Rng::derive(rng_seed, {0xE1150DEULL});
  for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
    size_t gi = size_t(rng.uniform_int(uint64_t(goal_cats.size())));
    Cell c = free_cells[size_t(rng.uniform_int(uint64_t(free_cells.size())))];
    double d = oracle.cached_category_field(goal_cats[gi]).at(c);
    if (d < p.min_goal_dist_m || d > p.max_goal_dist_m) continue;
    EpisodeSpec spec;
    spec.scene_id = scene.seed;
    Vec2 pos = gt.cell_center(c);
    spec.start = {pos.x, pos.y, 0.0};
    spec.goal_category = goal_cats[gi];
    spec.seed = rng_seed;
    return spec;
  }
  throw Error("sample_episode: no feasible (start, goal) pair after bounded retries");
}

}  // namespace semnav::world
