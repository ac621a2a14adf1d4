#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "semnav/core/binio.hpp"
#include "semnav/core/error.hpp"
#include "semnav/core/grid.hpp"
#include "semnav/world/categories.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::mapping {

struct MapConfig {
  int size_cells = 480;        // M
  double cell_m = world::kCellM;
  int num_categories = world::kNumCategories;  // C; K = C + 2 channels
  double voxel_z_max_m = 2.0;
  double obstacle_z_min_m = 0.2;
  double obstacle_z_max_m = 1.5;

  int channels() const { return num_categories + 2; }
  bool operator==(const MapConfig&) const = default;
};

inline constexpr int kChanObstacle = 0;
inline constexpr int kChanExplored = 1;
inline constexpr int kChanCategory0 = 2;

/** World-anchored cell addressing: the map center cell sits on `origin`. */
struct MapFrameRef {
  Vec2 origin;  // world position of the center cell's center
  int size = 480;
  double cell = world::kCellM;

  Cell world_to_cell(Vec2 p) const {
    return {size / 2 + int(std::floor((p.x - origin.x) / cell + 0.5)),
            size / 2 + int(std::floor((p.y - origin.y) / cell + 0.5))};
  }
  Vec2 cell_center(Cell c) const {
    return {origin.x + (c.x - size / 2) * cell, origin.y + (c.y - size / 2) * cell};
  }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.x < size && c.y >= 0 && c.y < size; }
};

/**
 * One projected sensor frame, already registered in map cells: a rectangular
 * window [x0, x0+w) x [y0, y0+h) holding obstacle/explored planes and one bit
 * per category.
 */
struct FrameMap {
  int x0 = 0, y0 = 0;
  Grid2D<uint8_t> obstacle;
  Grid2D<uint8_t> explored;
  Grid2D<uint16_t> categories;

  int width() const { return obstacle.width(); }
  int height() const { return obstacle.height(); }
  void reset(int nx0, int ny0, int w, int h) {
    x0 = nx0;
    y0 = ny0;
    if (obstacle.width() != w || obstacle.height() != h) {
      obstacle = Grid2D<uint8_t>(w, h, 0);
      explored = Grid2D<uint8_t>(w, h, 0);
      categories = Grid2D<uint16_t>(w, h, 0);
    } else {
      obstacle.fill(0);
      explored.fill(0);
      categories.fill(0);
    }
  }
};

/**
 * Episodic semantic map m: K x M x M, channel 0 obstacles, channel 1 explored
 * area, channels 2..K-1 one per category. Values live in [0,1] and only ever
 * grow (channel-wise max pooling), starting from all zeros.
 */
class SemanticMap {
 public:
  SemanticMap() : SemanticMap(MapConfig{}, Vec2{0, 0}) {}
  SemanticMap(const MapConfig& cfg, Vec2 origin_world)
      : cfg_(cfg), ref_{origin_world, cfg.size_cells, cfg.cell_m} {
    channels_.reserve(size_t(cfg.channels()));
    for (int k = 0; k < cfg.channels(); ++k)
      channels_.emplace_back(cfg.size_cells, cfg.size_cells, 0.0f);
    boxes_.resize(size_t(cfg.channels()));
    counts_.assign(size_t(cfg.channels()), 0);
  }

  const MapConfig& config() const { return cfg_; }
  const MapFrameRef& frame_ref() const { return ref_; }

  const Grid2D<float>& channel(int k) const { return channels_[size_t(k)]; }
  const Grid2D<float>& obstacle() const { return channels_[kChanObstacle]; }
  const Grid2D<float>& explored() const { return channels_[kChanExplored]; }
  const Grid2D<float>& category(int c) const {
    return channels_[size_t(kChanCategory0 + c)];
  }

  const CellBox& channel_box(int k) const { return boxes_[size_t(k)]; }
  size_t channel_count(int k) const { return counts_[size_t(k)]; }

  /** Channel-wise max of this map and a projected frame (monotone update). */
  void apply_frame(const FrameMap& f) {
    apply_plane(kChanObstacle, f.x0, f.y0, f.obstacle);
    apply_plane(kChanExplored, f.x0, f.y0, f.explored);
    for (int c = 0; c < cfg_.num_categories; ++c) {
      auto& ch = channels_[size_t(kChanCategory0 + c)];
      auto& box = boxes_[size_t(kChanCategory0 + c)];
      auto& cnt = counts_[size_t(kChanCategory0 + c)];
      const uint16_t bit = uint16_t(1u << c);
      for (int y = 0; y < f.height(); ++y) {
        int my = f.y0 + y;
        if (my < 0 || my >= cfg_.size_cells) continue;
        for (int x = 0; x < f.width(); ++x) {
          if (!(f.categories.at(x, y) & bit)) continue;
          int mx = f.x0 + x;
          if (mx < 0 || mx >= cfg_.size_cells) continue;
          if (ch.at(mx, my) < 1.0f) {
            ch.at(mx, my) = 1.0f;
            box.grow(mx, my);
            ++cnt;
          }
        }
      }
    }
  }

  bool operator==(const SemanticMap& o) const {
    return cfg_ == o.cfg_ && channels_ == o.channels_;
  }

  void save(const std::string& path) const {
    BinWriter w;
    w.magic("SMAP");
    w.u16(1);
    w.u16(uint16_t(cfg_.channels()));
    w.u16(uint16_t(cfg_.size_cells));
    for (const auto& ch : channels_)
      for (size_t i = 0; i < ch.size(); ++i) w.f32(ch[i]);
    w.save(path);
  }

  static SemanticMap load(const std::string& path) {
    BinReader r = BinReader::from_file(path);
    r.expect_magic("SMAP");
    uint16_t version = r.u16();
    if (version != 1) throw ParseError("unsupported SMAP version");
    int K = r.u16();
    int M = r.u16();
    MapConfig cfg;
    cfg.size_cells = M;
    cfg.num_categories = K - 2;
    require(cfg.num_categories >= 0, "SMAP: bad channel count");
    SemanticMap m(cfg, Vec2{0, 0});
    for (int k = 0; k < K; ++k) {
      auto& ch = m.channels_[size_t(k)];
      for (size_t i = 0; i < ch.size(); ++i) {
        ch[i] = r.f32();
        if (ch[i] > 0.0f) {
          m.boxes_[size_t(k)].grow(int(i) % M, int(i) / M);
          ++m.counts_[size_t(k)];
        }
      }
    }
    if (r.remaining() != 0) throw ParseError("trailing bytes in SMAP", long(r.offset()));
    return m;
  }

 private:
  void apply_plane(int k, int x0, int y0, const Grid2D<uint8_t>& plane) {
    auto& ch = channels_[size_t(k)];
    auto& box = boxes_[size_t(k)];
    auto& cnt = counts_[size_t(k)];
    for (int y = 0; y < plane.height(); ++y) {
      int my = y0 + y;
      if (my < 0 || my >= cfg_.size_cells) continue;
      for (int x = 0; x < plane.width(); ++x) {
        if (!plane.at(x, y)) continue;
        int mx = x0 + x;
        if (mx < 0 || mx >= cfg_.size_cells) continue;
        if (ch.at(mx, my) < 1.0f) {
          ch.at(mx, my) = 1.0f;
          box.grow(mx, my);
          ++cnt;
        }
      }
    }
  }

  MapConfig cfg_;
  MapFrameRef ref_;
  std::vector<Grid2D<float>> channels_;
  std::vector<CellBox> boxes_;
  std::vector<size_t> counts_;
};

/** Pure form of the temporal aggregation: max(prev, frame), no decay. */
inline SemanticMap aggregate(const SemanticMap& prev, const FrameMap& frame) {
  SemanticMap out = prev;
  out.apply_frame(frame);
  return out;
}

}  // namespace semnav::mapping
