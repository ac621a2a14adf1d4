#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "semnav/core/error.hpp"
#include "semnav/sensor/camera.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::sensor {

inline constexpr float kDepthSentinel = std::numeric_limits<float>::infinity();
inline constexpr uint8_t kLabelBackground = 255;  // floor / out of range
inline constexpr uint8_t kLabelStructure = 254;   // walls

/** z-depth image: distance along the optical axis, meters; inf = max range. */
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> z;

  float at(int u, int v) const { return z[size_t(v) * width + u]; }
  bool is_hit(int u, int v) const { return std::isfinite(at(u, v)); }
};

struct SemanticImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> labels;

  uint8_t at(int u, int v) const { return labels[size_t(v) * width + u]; }
};

/**
 * Depth + semantics of one pose, plus the per-column clear range used to mark
 * explored free space (max planar z-depth any of the column's rays reached,
 * clipped to the mapped height band).
 */
struct RenderedFrame {
  DepthImage depth;
  SemanticImage semantics;
  std::vector<float> column_clear;  // z-depth units, one per column
};

namespace render_detail {

struct SurfaceEvent {
  double d_in;    // z-depth at the first boundary crossing
  double d_out;   // z-depth leaving the footprint (== d_in for walls)
  double height;  // surface rises [0, height]
  uint8_t label;
};

// Height band that contributes to the map; rays are only considered
// informative while they travel inside it.
inline constexpr double kBandTopM = 2.0;

inline void column_events(const world::Scene& scene, Vec2 p, double dirx, double diry,
                          double max_d, std::vector<SurfaceEvent>& out) {
  out.clear();
  constexpr double kMinD = 1e-9;
  for (const auto& w : scene.walls) {
    double d, cross;
    if (w.vertical()) {
      if (std::abs(dirx) < 1e-14) continue;
      d = (w.x0 - p.x) / dirx;
      cross = p.y + d * diry;
      if (cross < std::min(w.y0, w.y1) || cross > std::max(w.y0, w.y1)) continue;
    } else {
      if (std::abs(diry) < 1e-14) continue;
      d = (w.y0 - p.y) / diry;
      cross = p.x + d * dirx;
      if (cross < std::min(w.x0, w.x1) || cross > std::max(w.x0, w.x1)) continue;
    }
    if (d <= kMinD || d > max_d) continue;
    out.push_back({d, d, w.height, kLabelStructure});
  }
  for (const auto& o : scene.objects) {
    const Rect& r = o.footprint;
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int axis = 0; axis < 2 && !miss; ++axis) {
      double origin = axis ? p.y : p.x;
      double dir = axis ? diry : dirx;
      double lo = axis ? r.y0 : r.x0;
      double hi = axis ? r.y1 : r.x1;
      if (std::abs(dir) < 1e-14) {
        if (origin < lo || origin > hi) miss = true;
      } else {
        double a = (lo - origin) / dir;
        double b = (hi - origin) / dir;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
      }
    }
    if (miss || t0 > t1 || t1 <= kMinD || t0 > max_d) continue;
    if (t0 <= kMinD) continue;  // camera inside the footprint: rejected earlier
    out.push_back({t0, t1, o.height, uint8_t(o.category)});
  }
  std::sort(out.begin(), out.end(),
            [](const SurfaceEvent& a, const SurfaceEvent& b) { return a.d_in < b.d_in; });
}

}  // namespace render_detail

/**
 * Renders depth and semantics in one pass. Per column the planar ray is
 * intersected with every wall and footprint boundary; a pixel sees the
 * nearest vertical surface whose height interval contains its ray elevation,
 * the top face of a footprint it dives into, or the floor. Depth is the
 * z-depth convention: distance along the optical axis.
 */
inline void render_frame_into(const world::Scene& scene, const Pose& pose,
                              const Intrinsics& intr, const SensorConfig& cfg,
                              RenderedFrame& out) {
  for (const auto& o : scene.objects)
    if (o.height >= world::kObstacleHeightM && o.footprint.contains_open(pose.position()))
      throw Error("render: pose inside obstacle geometry");

  const int W = intr.width, H = intr.height;
  out.depth.width = W;
  out.depth.height = H;
  out.depth.z.assign(size_t(W) * H, kDepthSentinel);
  out.semantics.width = W;
  out.semantics.height = H;
  out.semantics.labels.assign(size_t(W) * H, kLabelBackground);
  out.column_clear.assign(size_t(W), float(cfg.max_depth_m));

  const double ch = cfg.camera_height_m;
  const double maxd = cfg.max_depth_m;
  const double fwdx = std::cos(pose.theta), fwdy = std::sin(pose.theta);
  const double rightx = fwdy, righty = -fwdx;

  std::vector<render_detail::SurfaceEvent> events;
  auto coldepth = std::vector<double>(size_t(H));
  auto collabel = std::vector<uint8_t>(size_t(H));

  for (int u = 0; u < W; ++u) {
    const double k = (u - intr.cx) / intr.fx;
    const double dirx = fwdx + k * rightx;
    const double diry = fwdy + k * righty;
    render_detail::column_events(scene, pose.position(), dirx, diry, maxd, events);

    std::fill(coldepth.begin(), coldepth.end(), std::numeric_limits<double>::infinity());
    std::fill(collabel.begin(), collabel.end(), kLabelBackground);

    for (const auto& e : events) {
      // Vertical face: rows whose elevation at d_in lies in [0, height].
      int vA = int(std::ceil(intr.cy + intr.fy * (ch - e.height) / e.d_in));
      int vB = int(std::floor(intr.cy + intr.fy * ch / e.d_in));
      vA = std::max(vA, 0);
      vB = std::min(vB, H - 1);
      for (int v = vA; v <= vB; ++v) {
        if (e.d_in < coldepth[size_t(v)]) {
          coldepth[size_t(v)] = e.d_in;
          collabel[size_t(v)] = e.label;
        }
      }
      // Top face: descending rays that pass over the front edge but sink
      // below the surface height before leaving the footprint.
      if (e.d_out > e.d_in && e.height < ch) {
        int vTa = int(std::ceil(intr.cy + intr.fy * (ch - e.height) / e.d_out));
        vTa = std::max(vTa, int(std::floor(intr.cy)) + 1);
        int vTb = std::min(vA - 1, H - 1);
        for (int v = vTa; v <= vTb; ++v) {
          double d_top = intr.fy * (ch - e.height) / (v - intr.cy);
          if (d_top > e.d_in && d_top <= e.d_out && d_top < coldepth[size_t(v)]) {
            coldepth[size_t(v)] = d_top;
            collabel[size_t(v)] = e.label;
          }
        }
      }
    }

    // Floor, then the max-range clamp and the explored clear range.
    double clear = 0.0;
    for (int v = 0; v < H; ++v) {
      double q = (v - intr.cy) / intr.fy;  // elevation drop per meter of depth
      if (q > 0.0) {
        double d_floor = ch / q;
        if (d_floor <= maxd && d_floor < coldepth[size_t(v)]) {
          coldepth[size_t(v)] = d_floor;
          collabel[size_t(v)] = kLabelBackground;
        }
      }
      double d = coldepth[size_t(v)];
      size_t idx = size_t(v) * W + size_t(u);
      if (d > maxd) {
        out.depth.z[idx] = kDepthSentinel;
        out.semantics.labels[idx] = kLabelBackground;
        d = maxd;
      } else {
        out.depth.z[idx] = float(d);
        out.semantics.labels[idx] = collabel[size_t(v)];
      }
      if (q < 0.0) {  // ascending ray leaves the mapped band at z = band top
        double d_band = (ch - render_detail::kBandTopM) / q;
        d = std::min(d, d_band);
      }
      clear = std::max(clear, d);
    }
    out.column_clear[size_t(u)] = float(clear);
  }
}

inline RenderedFrame render_frame(const world::Scene& scene, const Pose& pose,
                                  const Intrinsics& intr, const SensorConfig& cfg) {
  RenderedFrame f;
  render_frame_into(scene, pose, intr, cfg, f);
  return f;
}

inline DepthImage render_depth(const world::Scene& scene, const Pose& pose,
                               const Intrinsics& intr, const SensorConfig& cfg) {
  return render_frame(scene, pose, intr, cfg).depth;
}

inline SemanticImage render_semantics(const world::Scene& scene, const Pose& pose,
                                      const Intrinsics& intr, const SensorConfig& cfg) {
  return render_frame(scene, pose, intr, cfg).semantics;
}

}  // namespace semnav::sensor
