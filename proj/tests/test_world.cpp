#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "semnav/world/episode.hpp"
#include "semnav/world/geodesic.hpp"
#include "semnav/world/raster.hpp"
#include "semnav/world/scene.hpp"
#include "semnav/world/scene_gen.hpp"
#include "test_oracles.hpp"

using namespace semnav;
using namespace semnav::world;

namespace {

SceneParams small_params() {
  SceneParams p;
  p.extent_w_m = 8.0;
  p.extent_h_m = 8.0;
  p.rooms_min = 3;
  p.rooms_max = 5;
  p.object_density = 0.15;
  p.lambda = 0.5;
  return p;
}

double rect_gap(const Rect& a, const Rect& b) {
  double dx = std::max({a.x0 - b.x1, b.x0 - a.x1, 0.0});
  double dy = std::max({a.y0 - b.y1, b.y0 - a.y1, 0.0});
  return std::sqrt(dx * dx + dy * dy);
}

/** Fraction of goal instances whose nearest anchor-category instance is within 2 m. */
double anchor_adjacency_fraction(uint64_t seed0, int n_scenes, double lambda) {
  SceneParams p = small_params();
  p.lambda = lambda;
  int total = 0;
  int close = 0;
  for (int i = 0; i < n_scenes; ++i) {
    Scene s = generate_scene(seed0 + uint64_t(i), p);
    for (const auto& o : s.objects) {
      if (!is_goal_category(o.category)) continue;
      int anchor = anchor_of(o.category);
      double best = 1e9;
      for (const auto& a : s.objects)
        if (a.category == anchor) best = std::min(best, rect_gap(o.footprint, a.footprint));
      ++total;
      if (best <= 2.0) ++close;
    }
  }
  REQUIRE(total > 0);
  return double(close) / double(total);
}

}  // namespace

TEST_CASE("generate_scene is deterministic") {
  SceneParams p = small_params();
  Scene a = generate_scene(7, p);
  Scene b = generate_scene(7, p);
  CHECK(a == b);
  Scene c = generate_scene(8, p);
  CHECK(a != c);
}

TEST_CASE("single-room zero-object scene is walls only") {
  SceneParams p;
  p.extent_w_m = 5.0;
  p.extent_h_m = 5.0;
  p.rooms_min = 1;
  p.rooms_max = 1;
  p.object_density = 0.0;
  p.require_goal_instances = false;
  Scene s = generate_scene(3, p);
  CHECK(s.objects.empty());
  CHECK(s.walls.size() == 4);  // boundary only
}

TEST_CASE("generate_scene rejects tiny extents") {
  SceneParams p = small_params();
  p.extent_w_m = 3.0;
  CHECK_THROWS_AS(generate_scene(1, p), Error);
}

TEST_CASE("scene invariants hold over a corpus") {
  SceneParams p = small_params();
  for (uint64_t seed = 100; seed < 130; ++seed) {
    Scene s = generate_scene(seed, p);
    CHECK_NOTHROW(validate_scene(s));
    // every goal category present
    for (int g = 0; g < kNumGoalCategories; ++g) {
      bool found = false;
      for (const auto& o : s.objects) found = found || o.category == g;
      CHECK(found);
    }
  }
}

TEST_CASE("category exclusion flag removes the category") {
  SceneParams p = small_params();
  p.exclude_category = kToilet;
  Scene s = generate_scene(11, p);
  for (const auto& o : s.objects) CHECK(o.category != kToilet);
}

TEST_CASE("lambda controls goal/anchor adjacency" * doctest::timeout(600)) {
  // Statistics over a fixed-seed corpus; thresholds from the generator contract.
  double high = anchor_adjacency_fraction(5000, 120, 1.0);
  double low = anchor_adjacency_fraction(9000, 120, 0.0);
  CHECK(high >= 0.95);
  CHECK(low <= 0.5);
}

TEST_CASE("raster: empty scene is boundary walls only") {
  SceneParams p;
  p.extent_w_m = 5.0;
  p.extent_h_m = 5.0;
  p.rooms_min = 1;
  p.rooms_max = 1;
  p.object_density = 0.0;
  p.require_goal_instances = false;
  Scene s = generate_scene(3, p);
  auto g = rasterize_scene(s);
  CHECK(g.cells_x == 100);
  CHECK(g.cells_y == 100);
  for (int y = 0; y < g.cells_y; ++y)
    for (int x = 0; x < g.cells_x; ++x) {
      bool border = x == 0 || y == 0 || x == g.cells_x - 1 || y == g.cells_y - 1;
      CHECK(bool(g.obstacle.at(x, y)) == border);
      CHECK(g.categories.at(x, y) == 0);
    }
}

TEST_CASE("raster: cell-aligned half-meter box covers exactly 10x10 cells") {
  Scene s;
  s.width_m = 5.0;
  s.height_m = 5.0;
  s.objects.push_back({kBed, Rect{2.0, 2.0, 2.5, 2.5}, 0.6});
  auto g = rasterize_scene(s);
  int count = 0;
  for (int y = 0; y < g.cells_y; ++y)
    for (int x = 0; x < g.cells_x; ++x)
      if (g.categories.at(x, y) >> kBed & 1u) {
        ++count;
        CHECK(x >= 40);
        CHECK(x <= 49);
        CHECK(y >= 40);
        CHECK(y <= 49);
        CHECK(g.obstacle.at(x, y) == 1);
      }
  CHECK(count == 100);
}

TEST_CASE("raster: low objects are semantic but not obstacles") {
  Scene s;
  s.width_m = 5.0;
  s.height_m = 5.0;
  s.objects.push_back({kPottedPlant, Rect{1.0, 1.0, 1.3, 1.3}, 0.15});
  auto g = rasterize_scene(s);
  Cell c = g.cell_of({1.1, 1.1});
  CHECK(bool(g.categories.at(c.x, c.y) >> kPottedPlant & 1u));
  CHECK(g.obstacle.at(c.x, c.y) == 0);
}

TEST_CASE("raster matches brute-force point-in-rect oracle on random scenes") {
  SceneParams p = small_params();
  for (uint64_t seed : {41ULL, 42ULL, 43ULL}) {
    Scene s = generate_scene(seed, p);
    auto g = rasterize_scene(s);
    const double h = g.cell_m;
    const double pull = h / 100.0;
    for (int y = 0; y < g.cells_y; ++y)
      for (int x = 0; x < g.cells_x; ++x) {
        uint16_t expected = 0;
        for (const auto& o : s.objects) {
          Vec2 samples[5] = {
              {(x + 0.5) * h, (y + 0.5) * h},
              {x * h + pull, y * h + pull},
              {(x + 1) * h - pull, y * h + pull},
              {x * h + pull, (y + 1) * h - pull},
              {(x + 1) * h - pull, (y + 1) * h - pull},
          };
          for (const auto& q : samples)
            if (o.footprint.contains(q)) {
              expected = uint16_t(expected | (1u << o.category));
              break;
            }
        }
        REQUIRE_MESSAGE(g.categories.at(x, y) == expected,
                        "cell (" << x << "," << y << ") seed " << seed);
      }
  }
}

TEST_CASE("raster: walls cover exactly their cell band") {
  Scene s;
  s.width_m = 5.0;
  s.height_m = 5.0;
  s.walls.push_back({2.025, 1.025, 2.025, 3.975, 2.5});  // vertical, mid-cell
  auto g = rasterize_scene(s);
  for (int y = 0; y < g.cells_y; ++y)
    for (int x = 0; x < g.cells_x; ++x) {
      bool expected = x == 40 && y >= 20 && y <= 79;
      CHECK(bool(g.obstacle.at(x, y)) == expected);
    }
}

TEST_CASE("geodesic: a==b is zero and line-of-sight is near Euclidean") {
  SceneParams p;
  p.extent_w_m = 8.0;
  p.extent_h_m = 8.0;
  p.rooms_min = 1;
  p.rooms_max = 1;
  p.object_density = 0.0;
  p.require_goal_instances = false;
  Scene s = generate_scene(5, p);
  CHECK(geodesic_distance(s, {2, 2}, {2, 2}) == 0.0);
  double d = geodesic_distance(s, {2.025, 2.025}, {6.025, 5.025});
  CHECK(d == doctest::Approx(5.0).epsilon(0.02));
}

TEST_CASE("geodesic matches an independent Dijkstra around a wall") {
  Scene s;
  s.width_m = 6.0;
  s.height_m = 6.0;
  s.walls.push_back({0.025, 0.025, 5.975, 0.025, 2.5});
  s.walls.push_back({0.025, 5.975, 5.975, 5.975, 2.5});
  s.walls.push_back({0.025, 0.025, 0.025, 5.975, 2.5});
  s.walls.push_back({5.975, 0.025, 5.975, 5.975, 2.5});
  s.walls.push_back({3.025, 0.025, 3.025, 4.525, 2.5});  // dividing wall, gap at top
  Vec2 a{1.5, 1.5}, b{4.5, 1.5};

  GeodesicOracle oracle(s);
  double got = oracle.distance(a, b);

  Grid2D<uint8_t> passable = oracle.traversable();
  auto ref = oracle::dijkstra16(passable, {oracle.ground_truth().cell_of(a)});
  double expected = ref.at(oracle.ground_truth().cell_of(b)) * kCellM;
  CHECK(std::isfinite(got));
  CHECK(got == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("geodesic symmetry and Euclidean lower bound on random scenes") {
  SceneParams p = small_params();
  Scene s = generate_scene(77, p);
  GeodesicOracle oracle(s);
  Rng rng(123);
  int checked = 0;
  while (checked < 12) {
    Vec2 a{rng.uniform(0.5, 7.5), rng.uniform(0.5, 7.5)};
    Vec2 b{rng.uniform(0.5, 7.5), rng.uniform(0.5, 7.5)};
    double ab = oracle.distance(a, b);
    if (!std::isfinite(ab)) continue;
    double ba = oracle.distance(b, a);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    CHECK(ab >= distance(a, b) - 2.0 * kCellM - 1e-9);
    ++checked;
  }
}

TEST_CASE("geodesic unreachable is infinite") {
  Scene s;
  s.width_m = 6.0;
  s.height_m = 6.0;
  s.walls.push_back({3.025, 0.0, 3.025, 6.0, 2.5});  // full divider
  double d = geodesic_distance(s, {1.5, 3.0}, {4.5, 3.0});
  CHECK(!std::isfinite(d));
}

TEST_CASE("scene save/load round-trips bit-exactly") {
  SceneParams p = small_params();
  Scene s = generate_scene(21, p);
  auto path = std::filesystem::temp_directory_path() / "semnav_scene_rt.json";
  save_scene(s, path.string());
  Scene t = load_scene(path.string());
  CHECK(s == t);
  std::filesystem::remove(path);
}

TEST_CASE("truncated scene file raises a parse error") {
  SceneParams p = small_params();
  Scene s = generate_scene(22, p);
  auto path = std::filesystem::temp_directory_path() / "semnav_scene_trunc.json";
  save_scene(s, path.string());
  auto full = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, full / 2);
  CHECK_THROWS_AS(load_scene(path.string()), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("hand-written minimal scene file parses field by field") {
  const char* text = R"({
    "format": 1,
    "extent": [5.0, 4.0],
    "seed": 99,
    "categories": [],
    "walls": [{"x0": 0.025, "y0": 0.025, "x1": 4.975, "y1": 0.025, "height": 2.5}],
    "objects": [{"category": "toilet", "rect": [1.0, 1.0, 1.4, 1.6], "height": 0.7}]
  })";
  Scene s = scene_from_json(nlohmann::json::parse(text));
  CHECK(s.width_m == 5.0);
  CHECK(s.height_m == 4.0);
  CHECK(s.seed == 99);
  REQUIRE(s.walls.size() == 1);
  CHECK(s.walls[0].y0 == 0.025);
  CHECK(s.walls[0].height == 2.5);
  REQUIRE(s.objects.size() == 1);
  CHECK(s.objects[0].category == kToilet);
  CHECK(s.objects[0].footprint == Rect{1.0, 1.0, 1.4, 1.6});
  CHECK(s.objects[0].height == 0.7);
}

TEST_CASE("sample_episode: deterministic, goal present, distance in range") {
  SceneParams p = small_params();
  Scene s = generate_scene(31, p);
  GeodesicOracle oracle(s);
  oracle.precompute_category_fields();
  EpisodeSpec a = sample_episode(s, oracle, 555);
  EpisodeSpec b = sample_episode(s, oracle, 555);
  CHECK(a == b);
  CHECK(is_goal_category(a.goal_category));
  double d = oracle.cached_category_field(a.goal_category)
                 .at(oracle.ground_truth().cell_of(a.start.position()));
  CHECK(d >= 1.5);
  CHECK(d <= 30.0);
}

TEST_CASE("sample_episode: chair-only scene always yields chair") {
  Scene s;
  s.width_m = 6.0;
  s.height_m = 6.0;
  s.walls.push_back({0.025, 0.025, 5.975, 0.025, 2.5});
  s.walls.push_back({0.025, 5.975, 5.975, 5.975, 2.5});
  s.walls.push_back({0.025, 0.025, 0.025, 5.975, 2.5});
  s.walls.push_back({5.975, 0.025, 5.975, 5.975, 2.5});
  s.objects.push_back({kChair, Rect{2.5, 2.5, 3.0, 3.0}, 0.8});
  GeodesicOracle oracle(s);
  oracle.precompute_category_fields();
  for (uint64_t seed = 0; seed < 20; ++seed)
    CHECK(sample_episode(s, oracle, seed).goal_category == kChair);
}

TEST_CASE("sample_episode: start cells pass a chi-square uniformity check") {
  // Open arena: a single chair in the corner so (start, goal) is almost never
  // rejected, 10 bins over free cells, fixed seed.
  Scene s;
  s.width_m = 10.0;
  s.height_m = 10.0;
  s.walls.push_back({0.025, 0.025, 9.975, 0.025, 2.5});
  s.walls.push_back({0.025, 9.975, 9.975, 9.975, 2.5});
  s.walls.push_back({0.025, 0.025, 0.025, 9.975, 2.5});
  s.walls.push_back({9.975, 0.025, 9.975, 9.975, 2.5});
  s.objects.push_back({kChair, Rect{4.5, 4.5, 5.0, 5.0}, 0.8});
  GeodesicOracle oracle(s);
  oracle.precompute_category_fields();

  // Support of the sampler: free cells whose goal distance is in range.
  const auto& free = oracle.traversable();
  const auto& goal_field = oracle.cached_category_field(kChair);
  std::vector<Cell> free_cells;
  for (int y = 0; y < free.height(); ++y)
    for (int x = 0; x < free.width(); ++x)
      if (free.at(x, y) && goal_field.at(x, y) >= 1.5 && goal_field.at(x, y) <= 30.0)
        free_cells.push_back({x, y});

  const int bins = 10;
  std::vector<int> counts(bins, 0);
  const int n = 10000;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    EpisodeSpec spec = sample_episode(s, oracle, uint64_t(1000 + i));
    Cell c = oracle.ground_truth().cell_of(spec.start.position());
    // bin by index within the free-cell list
    auto it = std::lower_bound(free_cells.begin(), free_cells.end(), c,
                               [](Cell a, Cell b) {
                                 return a.y != b.y ? a.y < b.y : a.x < b.x;
                               });
    REQUIRE(it != free_cells.end());
    size_t idx = size_t(it - free_cells.begin());
    counts[idx * bins / free_cells.size()] += 1;
    ++used;
  }
  double expected = double(used) / bins;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square 9 dof: p > 0.01 means chi2 below 21.67
  CHECK(chi2 < 21.67);
}

TEST_CASE("sample_episode reports infeasible when no valid pair exists") {
  // Chair sealed inside a doorless closet: every start has infinite distance.
  Scene s;
  s.width_m = 6.0;
  s.height_m = 6.0;
  s.walls.push_back({2.025, 2.025, 3.975, 2.025, 2.5});
  s.walls.push_back({2.025, 3.975, 3.975, 3.975, 2.5});
  s.walls.push_back({2.025, 2.025, 2.025, 3.975, 2.5});
  s.walls.push_back({3.975, 2.025, 3.975, 3.975, 2.5});
  s.objects.push_back({kChair, Rect{2.5, 2.5, 3.5, 3.5}, 0.8});
  GeodesicOracle oracle(s);
  oracle.precompute_category_fields();
  CHECK_THROWS_AS(sample_episode(s, oracle, 1), Error);
}
