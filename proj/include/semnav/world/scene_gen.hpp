#pragma once

#include <array>
#include <cmath>
#include <deque>
#include <vector>

#include "semnav/core/error.hpp"
#include "semnav/core/morphology.hpp"
#include "semnav/core/rng.hpp"
#include "semnav/world/raster.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::world {

struct SceneParams {
  double extent_w_m = 10.0;
  double extent_h_m = 10.0;
  int rooms_min = 4;
  int rooms_max = 7;
  double object_density = 0.12;  // objects per square meter
  double lambda = 0.5;           // goal/anchor co-occurrence strength in [0,1]
  int exclude_category = -1;     // generate no instances of this category
  bool require_goal_instances = true;
  double wall_height_m = 2.5;
  double door_width_m = 1.2;  // >= 3x agent diameter
  double min_room_side_m = 2.2;
  int max_scene_attempts = 25;

  bool operator==(const SceneParams&) const = default;
};

namespace gen_detail {

inline double snap_cell(double v) { return std::round(v / kCellM) * kCellM; }
// Wall lines sit mid-cell so they rasterize to exactly one cell band.
inline double snap_half(double v) {
  return (std::floor(v / kCellM) + 0.5) * kCellM;
}

enum RoomTheme { kBathroom, kBedroom, kLiving, kKitchen, kOffice, kGeneric };

inline bool theme_has(int theme, int cat) {
  switch (theme) {
    case kBathroom: return cat == kToilet || cat == kSink || cat == kCabinet;
    case kBedroom: return cat == kBed || cat == kNightstand || cat == kWardrobe;
    case kLiving:
      return cat == kCouch || cat == kTv || cat == kTvStand || cat == kPottedPlant ||
             cat == kTable;
    case kKitchen:
      return cat == kCounter || cat == kSink || cat == kCabinet || cat == kChair ||
             cat == kTable;
    case kOffice:
      return cat == kDesk || cat == kChair || cat == kShelf || cat == kPottedPlant;
    default: return true;
  }
}

// Footprint size range (meters) and height range per category. Heights stay
// below the camera so the sensor can see object tops.
struct SizeSpec {
  double w0, w1, d0, d1, h0, h1;
};
inline SizeSpec size_spec(int cat) {
  switch (cat) {
    case kChair: return {0.45, 0.55, 0.45, 0.55, 0.75, 0.85};
    case kCouch: return {0.90, 1.50, 0.75, 0.90, 0.70, 0.80};
    case kPottedPlant: return {0.30, 0.40, 0.30, 0.40, 0.50, 0.80};
    case kBed: return {0.95, 1.30, 1.50, 1.85, 0.50, 0.60};
    case kToilet: return {0.35, 0.45, 0.50, 0.65, 0.65, 0.80};
    case kTv: return {0.80, 1.20, 0.15, 0.20, 0.55, 0.70};
    case kTable: return {0.70, 1.20, 0.70, 1.20, 0.70, 0.78};
    case kSink: return {0.40, 0.55, 0.35, 0.45, 0.80, 0.87};
    case kCounter: return {0.60, 1.60, 0.55, 0.65, 0.85, 0.87};
    case kCabinet: return {0.45, 0.90, 0.35, 0.45, 0.75, 0.87};
    case kDesk: return {0.90, 1.30, 0.55, 0.70, 0.72, 0.78};
    case kShelf: return {0.50, 1.00, 0.30, 0.40, 0.80, 0.87};
    case kWardrobe: return {0.70, 1.10, 0.45, 0.55, 0.80, 0.87};
    case kNightstand: return {0.35, 0.50, 0.35, 0.50, 0.50, 0.60};
    case kTvStand: return {0.80, 1.40, 0.35, 0.45, 0.45, 0.55};
    default: return {0.4, 0.6, 0.4, 0.6, 0.5, 0.8};
  }
}

struct Room {
  Rect rect;
  int theme = kGeneric;
};

struct BspNode {
  Rect rect;
  // Door intervals on each edge: 0=left, 1=right, 2=bottom, 3=top.
  std::array<std::vector<std::pair<double, double>>, 4> doors;
};

struct Floorplan {
  std::vector<Room> rooms;
  std::vector<Wall> walls;
  std::vector<Rect> door_zones;  // keep-clear approach rectangles
};

inline bool interval_hits_door(const std::vector<std::pair<double, double>>& doors,
                               double pos, double clearance) {
  for (auto [a, b] : doors)
    if (pos > a - clearance && pos < b + clearance) return true;
  return false;
}

inline Floorplan build_floorplan(const SceneParams& p, Rng& rng) {
  Floorplan fp;
  const double lo = snap_half(0.0);  // boundary walls sit mid first cell
  const double hix = snap_half(p.extent_w_m - kCellM);
  const double hiy = snap_half(p.extent_h_m - kCellM);

  fp.walls.push_back({lo, lo, lo, hiy, p.wall_height_m});    // west
  fp.walls.push_back({hix, lo, hix, hiy, p.wall_height_m});  // east
  fp.walls.push_back({lo, lo, hix, lo, p.wall_height_m});    // south
  fp.walls.push_back({lo, hiy, hix, hiy, p.wall_height_m});  // north

  std::deque<BspNode> leaves;
  leaves.push_back({Rect{lo, lo, hix, hiy}, {}});

  int target = rng.uniform_int(p.rooms_min, p.rooms_max);
  const double min_side = p.min_room_side_m;
  const double end_margin = 0.35;  // wall kept solid near its ends

  while (int(leaves.size()) < target) {
    // Split the largest splittable leaf.
    int best = -1;
    double best_area = -1.0;
    for (size_t i = 0; i < leaves.size(); ++i) {
      const Rect& r = leaves[i].rect;
      if (std::max(r.width(), r.height()) >= 2 * min_side && r.area() > best_area) {
        best_area = r.area();
        best = int(i);
      }
    }
    if (best < 0) break;

    BspNode node = leaves[best];
    leaves.erase(leaves.begin() + best);
    const Rect& r = node.rect;
    bool vertical = r.width() >= r.height();

    double split = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < 24 && !ok; ++attempt) {
      double span = vertical ? r.width() : r.height();
      double c = rng.uniform(min_side, span - min_side);
      split = snap_half((vertical ? r.x0 : r.y0) + c);
      if (split - (vertical ? r.x0 : r.y0) < min_side - kCellM) continue;
      if ((vertical ? r.x1 : r.y1) - split < min_side - kCellM) continue;
      // The new wall must land on solid wall at both ends, not in a door.
      const auto& endA = node.doors[vertical ? 2 : 0];
      const auto& endB = node.doors[vertical ? 3 : 1];
      ok = !interval_hits_door(endA, split, end_margin) &&
           !interval_hits_door(endB, split, end_margin);
    }
    if (!ok) {
      fp.rooms.push_back({node.rect, kGeneric});  // give up on this leaf
      --target;
      continue;
    }

    double a0 = vertical ? r.y0 : r.x0;
    double a1 = vertical ? r.y1 : r.x1;
    double dpos_lo = a0 + end_margin;
    double dpos_hi = a1 - end_margin - p.door_width_m;
    double d0 = snap_half(rng.uniform(dpos_lo, dpos_hi));
    double d1 = snap_half(d0 + p.door_width_m);

    if (vertical) {
      if (d0 - r.y0 > kCellM) fp.walls.push_back({split, r.y0, split, d0, p.wall_height_m});
      if (r.y1 - d1 > kCellM) fp.walls.push_back({split, d1, split, r.y1, p.wall_height_m});
      fp.door_zones.push_back({split - 0.45, d0 - 0.05, split + 0.45, d1 + 0.05});
    } else {
      if (d0 - r.x0 > kCellM) fp.walls.push_back({r.x0, split, d0, split, p.wall_height_m});
      if (r.x1 - d1 > kCellM) fp.walls.push_back({d1, split, r.x1, split, p.wall_height_m});
      fp.door_zones.push_back({d0 - 0.05, split - 0.45, d1 + 0.05, split + 0.45});
    }

    BspNode left, right;
    if (vertical) {
      left.rect = {r.x0, r.y0, split, r.y1};
      right.rect = {split, r.y0, r.x1, r.y1};
    } else {
      left.rect = {r.x0, r.y0, r.x1, split};
      right.rect = {r.x0, split, r.x1, r.y1};
    }
    // Inherit doors that fall on each child's perimeter; add the new one.
    for (int e = 0; e < 4; ++e) {
      for (auto d : node.doors[e]) {
        if (vertical) {
          if (e == 0) left.doors[0].push_back(d);
          else if (e == 1) right.doors[1].push_back(d);
          else {  // bottom/top edges are split at `split`
            if (d.first < split) left.doors[e].push_back({d.first, std::min(d.second, split)});
            if (d.second > split) right.doors[e].push_back({std::max(d.first, split), d.second});
          }
        } else {
          if (e == 2) left.doors[2].push_back(d);
          else if (e == 3) right.doors[3].push_back(d);
          else {
            if (d.first < split) left.doors[e].push_back({d.first, std::min(d.second, split)});
            if (d.second > split) right.doors[e].push_back({std::max(d.first, split), d.second});
          }
        }
      }
    }
    if (vertical) {
      left.doors[1].push_back({d0, d1});
      right.doors[0].push_back({d0, d1});
    } else {
      left.doors[3].push_back({d0, d1});
      right.doors[2].push_back({d0, d1});
    }
    leaves.push_back(left);
    leaves.push_back(right);
  }

  for (auto& n : leaves) fp.rooms.push_back({n.rect, kGeneric});

  // Theme assignment: rotate through the named themes so each appears.
  std::vector<int> themes = {kBathroom, kBedroom, kLiving, kKitchen, kOffice, kGeneric};
  rng.shuffle(themes);
  for (size_t i = 0; i < fp.rooms.size(); ++i)
    fp.rooms[i].theme = themes[i % themes.size()];
  return fp;
}

struct Placer {
  const SceneParams& p;
  const Floorplan& fp;
  Rng& rng;
  std::vector<ObjectInstance>& objects;
  static constexpr double kWallGap = 0.10;
  static constexpr double kObjGap = 0.30;

  bool placement_ok(const Rect& f, const ObjectInstance* anchor_exempt) const {
    for (const auto& z : fp.door_zones)
      if (f.overlaps_open(z)) return false;
    for (const auto& o : objects) {
      double gap = (&o == anchor_exempt) ? 0.0 : kObjGap;
      if (f.expanded(gap).overlaps_open(o.footprint)) return false;
    }
    return true;
  }

  Rect room_interior(const Room& room) const {
    return {room.rect.x0 + kWallGap, room.rect.y0 + kWallGap, room.rect.x1 - kWallGap,
            room.rect.y1 - kWallGap};
  }

  /** Uniform placement inside a given room. Returns false if it cannot fit. */
  bool place_in_room(int cat, const Room& room, ObjectInstance* out) {
    auto sz = size_spec(cat);
    Rect in = room_interior(room);
    for (int attempt = 0; attempt < 40; ++attempt) {
      double w = snap_cell(rng.uniform(sz.w0, sz.w1));
      double d = snap_cell(rng.uniform(sz.d0, sz.d1));
      if (rng.bernoulli(0.5)) std::swap(w, d);  // random orientation
      if (in.width() < w || in.height() < d) continue;
      double x0 = snap_cell(rng.uniform(in.x0, in.x1 - w));
      double y0 = snap_cell(rng.uniform(in.y0, in.y1 - d));
      Rect f{x0, y0, x0 + w, y0 + d};
      if (f.x0 < in.x0 || f.y0 < in.y0 || f.x1 > in.x1 || f.y1 > in.y1) continue;
      if (!placement_ok(f, nullptr)) continue;
      *out = {cat, f, snap_cell(rng.uniform(sz.h0, sz.h1))};
      return true;
    }
    return false;
  }

  /** Placement flush against one side of an anchor, gap in [0.25, 0.7] m. */
  bool place_adjacent(int cat, const ObjectInstance& anchor, ObjectInstance* out) {
    auto sz = size_spec(cat);
    const Room* room = nullptr;
    for (const auto& r : fp.rooms)
      if (r.rect.contains(anchor.footprint.center())) room = &r;
    if (!room) return false;
    Rect in = room_interior(*room);
    std::vector<int> sides = {0, 1, 2, 3};
    rng.shuffle(sides);
    for (int side : sides) {
      for (int attempt = 0; attempt < 24; ++attempt) {
        double w = snap_cell(rng.uniform(sz.w0, sz.w1));
        double d = snap_cell(rng.uniform(sz.d0, sz.d1));
        double gap = snap_cell(rng.uniform(0.25, 0.7));
        const Rect& a = anchor.footprint;
        double x0, y0;
        if (side == 0) {  // west of anchor
          x0 = a.x0 - gap - w;
          y0 = snap_cell(rng.uniform(a.y0 - d * 0.5, a.y1 - d * 0.5));
        } else if (side == 1) {  // east
          x0 = a.x1 + gap;
          y0 = snap_cell(rng.uniform(a.y0 - d * 0.5, a.y1 - d * 0.5));
        } else if (side == 2) {  // south
          y0 = a.y0 - gap - d;
          x0 = snap_cell(rng.uniform(a.x0 - w * 0.5, a.x1 - w * 0.5));
        } else {  // north
          y0 = a.y1 + gap;
          x0 = snap_cell(rng.uniform(a.x0 - w * 0.5, a.x1 - w * 0.5));
        }
        x0 = snap_cell(x0);
        y0 = snap_cell(y0);
        Rect f{x0, y0, x0 + w, y0 + d};
        if (f.x0 < in.x0 || f.y0 < in.y0 || f.x1 > in.x1 || f.y1 > in.y1) continue;
        if (!placement_ok(f, &anchor)) continue;
        *out = {cat, f, snap_cell(rng.uniform(sz.h0, sz.h1))};
        return true;
      }
    }
    return false;
  }

  const Room& pick_room(int cat, double theme_bias) {
    if (rng.bernoulli(theme_bias)) {
      std::vector<const Room*> themed;
      for (const auto& r : fp.rooms)
        if (theme_has(r.theme, cat)) themed.push_back(&r);
      if (!themed.empty()) return *themed[rng.uniform_int(uint64_t(themed.size()))];
    }
    return fp.rooms[rng.uniform_int(uint64_t(fp.rooms.size()))];
  }

  /** Goal-category placement: anchor first, then the goal next to it w.p. lambda. */
  bool place_goal(int goal) {
    int anchor_cat = anchor_of(goal);
    ObjectInstance g;
    bool anchored = anchor_cat != p.exclude_category && rng.bernoulli(p.lambda);
    if (anchored) {
      // Keep trying rooms until the anchor takes a companion; an anchor that
      // cannot take one is removed again so it does not skew the statistics.
      for (int room_attempt = 0; room_attempt < 8; ++room_attempt) {
        const Room& room = pick_room(goal, p.lambda);
        ObjectInstance anchor;
        if (!place_in_room(anchor_cat, room, &anchor)) continue;
        objects.push_back(anchor);
        if (place_adjacent(goal, objects.back(), &g)) {
          objects.push_back(g);
          return true;
        }
        objects.pop_back();
      }
    }
    // Independent placement (always the path taken at lambda = 0).
    if (anchor_cat != p.exclude_category && !anchored) {
      ObjectInstance anchor;
      if (place_in_room(anchor_cat, pick_room(anchor_cat, p.lambda), &anchor))
        objects.push_back(anchor);
    }
    for (int attempt = 0; attempt < 12; ++attempt) {
      const Room& r2 = fp.rooms[rng.uniform_int(uint64_t(fp.rooms.size()))];
      if (place_in_room(goal, r2, &g)) {
        objects.push_back(g);
        return true;
      }
    }
    return false;
  }
};

inline bool validate_navigability(const Scene& scene, const SceneParams& p) {
  auto gt = rasterize_scene(scene);
  auto blocked = dilate_disk(gt.obstacle, kAgentRadiusM / kCellM);
  // Flood fill free space from the largest free component.
  Grid2D<int> comp(gt.cells_x, gt.cells_y, -1);
  int ncomp = 0;
  std::vector<int> comp_size;
  std::deque<Cell> q;
  for (int y = 0; y < gt.cells_y; ++y)
    for (int x = 0; x < gt.cells_x; ++x) {
      if (blocked.at(x, y) || comp.at(x, y) >= 0) continue;
      comp.at(x, y) = ncomp;
      comp_size.push_back(0);
      q.push_back({x, y});
      while (!q.empty()) {
        Cell c = q.front();
        q.pop_front();
        ++comp_size[size_t(ncomp)];
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nx = c.x + dx[k], ny = c.y + dy[k];
          if (gt.in_bounds(nx, ny) && !blocked.at(nx, ny) && comp.at(nx, ny) < 0) {
            comp.at(nx, ny) = ncomp;
            q.push_back({nx, ny});
          }
        }
      }
      ++ncomp;
    }
  if (ncomp == 0) return false;
  int main_comp = 0;
  for (int i = 1; i < ncomp; ++i)
    if (comp_size[size_t(i)] > comp_size[size_t(main_comp)]) main_comp = i;
  // The main component must dominate: no walled-off free areas of note.
  size_t total_free = 0;
  for (int s : comp_size) total_free += size_t(s);
  if (double(comp_size[size_t(main_comp)]) < 0.95 * double(total_free)) return false;
  if (double(total_free) < 0.25 * double(gt.cells_x) * double(gt.cells_y)) return false;

  // Every object must be approachable from the main component.
  for (const auto& o : scene.objects) {
    Cell c0 = gt.cell_of({o.footprint.x0, o.footprint.y0});
    Cell c1 = gt.cell_of({o.footprint.x1, o.footprint.y1});
    bool reachable = false;
    int reach = int(kAgentRadiusM / kCellM) + int((p.door_width_m > 0 ? 1.0 : 1.0) / kCellM);
    for (int y = c0.y - reach; y <= c1.y + reach && !reachable; ++y)
      for (int x = c0.x - reach; x <= c1.x + reach && !reachable; ++x)
        if (gt.in_bounds(x, y) && comp.at(x, y) == main_comp) reachable = true;
    if (!reachable) return false;
  }
  return true;
}

}  // namespace gen_detail

/**
 * Deterministic procedural scene: BSP rooms with door gaps, themed furniture,
 * and goal objects planted next to their anchor categories with probability
 * `lambda`. A pure function of (seed, params).
 */
inline Scene generate_scene(uint64_t seed, const SceneParams& p) {
  require(p.extent_w_m >= 4.0 && p.extent_h_m >= 4.0, "scene extent must be >= 4 m");
  require(p.lambda >= 0.0 && p.lambda <= 1.0, "lambda must be in [0,1]");
  require(p.rooms_min >= 1 && p.rooms_max >= p.rooms_min, "bad room-count range");

  for (int attempt = 0; attempt < p.max_scene_attempts; ++attempt) {
    Rng rng = Rng::derive(seed, {0x5ce9e5ULL, uint64_t(attempt)});
    Scene scene;
    scene.seed = seed;
    scene.width_m = gen_detail::snap_cell(p.extent_w_m);
    scene.height_m = gen_detail::snap_cell(p.extent_h_m);

    auto fp = gen_detail::build_floorplan(p, rng);
    scene.walls = fp.walls;

    gen_detail::Placer placer{p, fp, rng, scene.objects};

    bool goals_ok = true;
    if (p.require_goal_instances) {
      for (int g = 0; g < kNumGoalCategories && goals_ok; ++g) {
        if (g == p.exclude_category) continue;
        goals_ok = placer.place_goal(g);
      }
    }
    if (!goals_ok) continue;

    int target_total = int(std::floor(p.object_density * scene.width_m * scene.height_m));
    int fillers = std::max(0, target_total - int(scene.objects.size()));
    for (int i = 0; i < fillers; ++i) {
      // Anchors twice as common as goal categories among the fill.
      int cat;
      do {
        int roll = rng.uniform_int(0, kNumGoalCategories + 2 * (kNumCategories - kNumGoalCategories) - 1);
        cat = roll < kNumGoalCategories
                  ? roll
                  : kNumGoalCategories + (roll - kNumGoalCategories) % (kNumCategories - kNumGoalCategories);
      } while (cat == p.exclude_category);
      if (is_goal_category(cat)) {
        placer.place_goal(cat);  // keeps the lambda adjacency statistics honest
      } else {
        const auto& room = placer.pick_room(cat, p.lambda);
        ObjectInstance o;
        if (placer.place_in_room(cat, room, &o)) scene.objects.push_back(o);
      }
    }

    validate_scene(scene);
    if (!gen_detail::validate_navigability(scene, p)) continue;
    return scene;
  }
  throw Error(format_msg("scene generation failed after %d attempts (placement failure)",
                         p.max_scene_attempts));
}

}  // namespace semnav::world
