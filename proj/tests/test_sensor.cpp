#include <doctest.h>

#include <filesystem>

#include "semnav/sensor/camera.hpp"
#include "semnav/sensor/frame_io.hpp"
#include "semnav/sensor/noise.hpp"
#include "semnav/sensor/render.hpp"
#include "semnav/world/geodesic.hpp"
#include "semnav/world/scene_gen.hpp"

using namespace semnav;
using namespace semnav::sensor;
using namespace semnav::world;

namespace {

Scene box_room(double size = 8.0) {
  Scene s;
  s.width_m = size;
  s.height_m = size;
  double lo = 0.025, hi = size - 0.025;
  s.walls.push_back({lo, lo, hi, lo, 2.5});
  s.walls.push_back({lo, hi, hi, hi, 2.5});
  s.walls.push_back({lo, lo, lo, hi, 2.5});
  s.walls.push_back({hi, lo, hi, hi, 2.5});
  return s;
}

const Intrinsics kIntr = make_intrinsics();
const SensorConfig kCfg;

}  // namespace

TEST_CASE("intrinsics invariants") {
  CHECK(kIntr.fx == doctest::Approx(320.0));
  CHECK(kIntr.fy == kIntr.fx);
  CHECK(kIntr.cx == doctest::Approx(319.5));
  CHECK(kIntr.cy == doctest::Approx(239.5));
  CHECK(kIntr.fx == doctest::Approx((kIntr.width / 2.0) /
                                    std::tan(90.0 * kPi / 180.0 / 2.0)));
}

TEST_CASE("depth: fronto-parallel wall reads exactly its z-depth") {
  Scene s = box_room(8.0);
  // wall 2 m ahead of the camera, spanning the room, 2 m tall
  s.walls.push_back({4.025, 0.025, 4.025, 7.975, 2.0});
  Pose pose{2.025, 4.0, 0.0};  // facing east
  auto frame = render_frame(s, pose, kIntr, kCfg);

  int exact = 0;
  for (int v = 0; v < kIntr.height; ++v)
    for (int u = 0; u < kIntr.width; ++u) {
      double elev = kCfg.camera_height_m - (v - kIntr.cy) / kIntr.fy * 2.0;
      if (elev >= 0.0 && elev <= 2.0) {
        REQUIRE_MESSAGE(frame.depth.at(u, v) == 2.0f, "u=" << u << " v=" << v);
        CHECK(frame.semantics.at(u, v) == kLabelStructure);
        ++exact;
      }
    }
  CHECK(exact > 100000);
}

TEST_CASE("depth: open direction gives sentinel except floor rows") {
  Scene s = box_room(14.0);  // walls are ~12 m away, beyond max depth
  Pose pose{1.5, 7.0, 0.0};
  auto frame = render_frame(s, pose, kIntr, kCfg);
  int u = kIntr.width / 2;
  for (int v = 0; v < kIntr.height; ++v) {
    double q = (v - kIntr.cy) / kIntr.fy;
    bool floor_in_range = q > 0.0 && kCfg.camera_height_m / q <= kCfg.max_depth_m;
    if (floor_in_range) {
      CHECK(frame.depth.at(u, v) == doctest::Approx(kCfg.camera_height_m / q));
      CHECK(frame.semantics.at(u, v) == kLabelBackground);
    } else {
      CHECK(frame.depth.at(u, v) == kDepthSentinel);
      CHECK(frame.semantics.at(u, v) == kLabelBackground);
    }
  }
}

TEST_CASE("depth: box front-face boundary row matches pinhole analytics") {
  Scene s = box_room(8.0);
  // 0.5 m tall box whose front face is 1.5 m from the camera
  s.objects.push_back({kBed, Rect{3.5, 3.0, 4.5, 5.0}, 0.5});
  Pose pose{2.0, 4.0, 0.0};
  auto frame = render_frame(s, pose, kIntr, kCfg);

  // First row (from the top) whose depth is the front-face depth 1.5.
  int u = kIntr.width / 2;
  int first_face_row = -1;
  for (int v = 0; v < kIntr.height; ++v)
    if (frame.depth.is_hit(u, v) && frame.depth.at(u, v) == doctest::Approx(1.5)) {
      first_face_row = v;
      break;
    }
  REQUIRE(first_face_row >= 0);
  double analytic = kIntr.cy - kIntr.fy * (0.5 - kCfg.camera_height_m) / 1.5;
  CHECK(std::abs(first_face_row - analytic) <= 1.0);
  CHECK(frame.semantics.at(u, first_face_row) == kBed);

  // Rows just above see the top face: deeper than the front face, same label.
  int above = first_face_row - 3;
  CHECK(frame.depth.at(u, above) > 1.5f);
  CHECK(frame.semantics.at(u, above) == kBed);
}

TEST_CASE("render rejects a pose inside an obstacle") {
  Scene s = box_room(8.0);
  s.objects.push_back({kTable, Rect{3.0, 3.0, 5.0, 5.0}, 0.75});
  CHECK_THROWS_AS(render_frame(s, Pose{4.0, 4.0, 0.0}, kIntr, kCfg), Error);
}

TEST_CASE("semantics agree with the rasterized scene at un-projected points") {
  SceneParams p;
  p.extent_w_m = 8.0;
  p.extent_h_m = 8.0;
  p.rooms_min = 3;
  p.rooms_max = 5;
  p.object_density = 0.15;
  p.lambda = 0.5;
  Scene s = generate_scene(1234, p);
  GeodesicOracle oracle(s);
  const auto& gt = oracle.ground_truth();

  std::vector<Cell> free_cells;
  for (int y = 0; y < gt.cells_y; ++y)
    for (int x = 0; x < gt.cells_x; ++x)
      if (oracle.traversable().at(x, y)) free_cells.push_back({x, y});

  Rng rng(99);
  int mismatches = 0, checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    Cell c = free_cells[size_t(rng.uniform_int(uint64_t(free_cells.size())))];
    Vec2 pos = gt.cell_center(c);
    Pose pose{pos.x, pos.y, rng.uniform(-kPi, kPi)};
    auto frame = render_frame(s, pose, kIntr, kCfg);
    double fx = std::cos(pose.theta), fy_ = std::sin(pose.theta);
    double rx = fy_, ry = -fx;
    for (int v = 0; v < kIntr.height; v += 7)
      for (int u = 0; u < kIntr.width; u += 7) {
        if (!frame.depth.is_hit(u, v)) continue;
        uint8_t label = frame.semantics.at(u, v);
        double d = frame.depth.at(u, v);
        double k = (u - kIntr.cx) / kIntr.fx;
        Vec2 w{pose.x + d * (fx + k * rx), pose.y + d * (fy_ + k * ry)};
        Cell wc = gt.cell_of(w);
        ++checked;
        bool ok = false;
        for (int dy = -1; dy <= 1 && !ok; ++dy)
          for (int dx = -1; dx <= 1 && !ok; ++dx) {
            int xx = wc.x + dx, yy = wc.y + dy;
            if (!gt.in_bounds(xx, yy)) continue;
            if (label < kNumCategories)
              ok = (gt.categories.at(xx, yy) >> label) & 1u;
            else if (label == kLabelStructure)
              ok = gt.obstacle.at(xx, yy) != 0;
            else
              ok = true;  // floor
          }
        if (!ok) ++mismatches;
      }
  }
  CHECK(checked > 10000);
  CHECK(mismatches == 0);
}

TEST_CASE("monotone occlusion: adding an object never increases depth") {
  Scene s = box_room(8.0);
  Pose pose{2.0, 4.0, 0.3};
  auto before = render_frame(s, pose, kIntr, kCfg);
  s.objects.push_back({kCouch, Rect{4.0, 3.5, 5.2, 4.4}, 0.75});
  auto after = render_frame(s, pose, kIntr, kCfg);
  for (size_t i = 0; i < before.depth.z.size(); ++i) {
    float b = std::isfinite(before.depth.z[i]) ? before.depth.z[i]
                                               : float(kCfg.max_depth_m) + 1.0f;
    float a = std::isfinite(after.depth.z[i]) ? after.depth.z[i]
                                              : float(kCfg.max_depth_m) + 1.0f;
    REQUIRE(a <= b + 1e-6f);
  }
}

TEST_CASE("rendering is deterministic") {
  Scene s = box_room(8.0);
  s.objects.push_back({kTv, Rect{5.0, 3.0, 6.0, 3.2}, 0.6});
  Pose pose{2.0, 4.0, -0.7};
  auto a = render_frame(s, pose, kIntr, kCfg);
  auto b = render_frame(s, pose, kIntr, kCfg);
  CHECK(a.depth.z == b.depth.z);
  CHECK(a.semantics.labels == b.semantics.labels);
  CHECK(a.column_clear == b.column_clear);
}

TEST_CASE("corrupt_segmentation: identity and full-miss extremes") {
  Scene s = box_room(8.0);
  s.objects.push_back({kChair, Rect{4.0, 3.6, 4.5, 4.4}, 0.8});
  auto frame = render_frame(s, Pose{2.0, 4.0, 0.0}, kIntr, kCfg);

  Rng rng(1);
  auto same = corrupt_segmentation(frame.semantics, frame.depth, rng, NoiseParams{});
  CHECK(same.labels == frame.semantics.labels);

  NoiseParams all_miss;
  all_miss.miss_rate = 1.0;
  auto gone = corrupt_segmentation(frame.semantics, frame.depth, rng, all_miss);
  for (auto l : gone.labels) CHECK((l == kLabelBackground || l == kLabelStructure));

  NoiseParams bad;
  bad.miss_rate = 1.5;
  CHECK_THROWS_AS(corrupt_segmentation(frame.semantics, frame.depth, rng, bad), Error);
}

TEST_CASE("corrupt_segmentation: binomial drop fraction over many components") {
  // Synthetic frames packed with single-pixel-separated blobs.
  SemanticImage sem;
  sem.width = 200;
  sem.height = 200;
  DepthImage dep;
  dep.width = 200;
  dep.height = 200;
  dep.z.assign(200 * 200, 1.0f);

  NoiseParams noise;
  noise.miss_rate = 0.2;
  Rng rng(42);
  int total = 0, dropped = 0;
  for (int frame_i = 0; frame_i < 25; ++frame_i) {
    sem.labels.assign(200 * 200, kLabelBackground);
    int id = frame_i;
    for (int by = 0; by + 4 < 200; by += 10)
      for (int bx = 0; bx + 4 < 200; bx += 10) {
        uint8_t lab = uint8_t(id++ % kNumCategories);
        for (int y = by; y < by + 4; ++y)
          for (int x = bx; x < bx + 4; ++x) sem.labels[size_t(y) * 200 + x] = lab;
      }
    auto noisy = corrupt_segmentation(sem, dep, rng, noise);
    for (int by = 0; by + 4 < 200; by += 10)
      for (int bx = 0; bx + 4 < 200; bx += 10) {
        ++total;
        if (noisy.labels[size_t(by) * 200 + bx] == kLabelBackground) ++dropped;
      }
  }
  CHECK(total == 10000);
  double frac = double(dropped) / double(total);
  CHECK(frac >= 0.19);
  CHECK(frac <= 0.21);
}

TEST_CASE("corrupt_segmentation: relabel picks a different category, erosion peels") {
  SemanticImage sem;
  sem.width = 32;
  sem.height = 32;
  sem.labels.assign(32 * 32, kLabelBackground);
  for (int y = 10; y < 20; ++y)
    for (int x = 10; x < 20; ++x) sem.labels[size_t(y) * 32 + x] = kToilet;
  DepthImage dep;
  dep.width = 32;
  dep.height = 32;
  dep.z.assign(32 * 32, 1.0f);

  NoiseParams relabel;
  relabel.confusion_rate = 1.0;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    auto out = corrupt_segmentation(sem, dep, rng, relabel);
    uint8_t lab = out.labels[size_t(15) * 32 + 15];
    CHECK(lab < kNumCategories);
    CHECK(lab != kToilet);
  }

  NoiseParams erode;
  erode.boundary_erosion_px = 2;
  Rng rng(5);
  auto out = corrupt_segmentation(sem, dep, rng, erode);
  int remaining = 0;
  for (auto l : out.labels)
    if (l == kToilet) ++remaining;
  CHECK(remaining == 6 * 6);  // 10x10 block peeled twice
  CHECK(out.labels[size_t(12) * 32 + 12] == kToilet);
  CHECK(out.labels[size_t(10) * 32 + 10] == kLabelBackground);
}

TEST_CASE("pose_reading: exact deltas in the previous frame") {
  Rng rng(1);
  PoseNoiseParams none;
  auto fwd = pose_reading({1, 1, 0}, {1.25, 1, 0}, none, rng);
  CHECK(fwd == PoseReading{0.25, 0, 0});

  double a = 30.0 * kPi / 180.0;
  auto turn = pose_reading({1, 1, 0.2}, {1, 1, 0.2 + a}, none, rng);
  CHECK(turn.dx == doctest::Approx(0.0));
  CHECK(turn.dy == doctest::Approx(0.0));
  CHECK(turn.dtheta == doctest::Approx(a));

  // forward while heading north: world +y becomes body +x
  auto north = pose_reading({0, 0, kPi / 2}, {0, 0.25, kPi / 2}, none, rng);
  CHECK(north.dx == doctest::Approx(0.25));
  CHECK(north.dy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pose_reading: noisy sigma matches the configured scale") {
  Rng rng(77);
  PoseNoiseParams noisy;
  noisy.sigma_trans_m = 0.01;
  double sq = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto r = pose_reading({0, 0, 0}, {0.25, 0, 0}, noisy, rng);
    sq += (r.dx - 0.25) * (r.dx - 0.25);
  }
  double sigma = std::sqrt(sq / n);
  CHECK(sigma == doctest::Approx(0.01).epsilon(0.10));
}

TEST_CASE("frame dumps round-trip") {
  Scene s = box_room(8.0);
  s.objects.push_back({kCouch, Rect{4.0, 3.5, 5.2, 4.4}, 0.75});
  auto frame = render_frame(s, Pose{2.0, 4.0, 0.1}, kIntr, kCfg);

  auto dir = std::filesystem::temp_directory_path();
  auto dpath = (dir / "semnav_d.bin").string();
  auto spath = (dir / "semnav_s.bin").string();
  save_depth(frame.depth, dpath);
  save_semantics(frame.semantics, spath);

  auto d2 = load_depth(dpath);
  auto s2 = load_semantics(spath);
  CHECK(s2.labels == frame.semantics.labels);
  int finite = 0;
  for (size_t i = 0; i < d2.z.size(); ++i) {
    if (std::isfinite(frame.depth.z[i])) {
      ++finite;
      CHECK(d2.z[i] == doctest::Approx(frame.depth.z[i]).epsilon(1e-3));
    } else {
      CHECK(!std::isfinite(d2.z[i]));
    }
  }
  CHECK(finite > 0);
  std::filesystem::remove(dpath);
  std::filesystem::remove(spath);
}
