#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "semnav/core/error.hpp"
#include "semnav/mapping/semantic_map.hpp"
#include "semnav/sensor/camera.hpp"
#include "semnav/sensor/render.hpp"

namespace semnav::mapping {

struct LabeledPoint {
  double x = 0, y = 0, z = 0;  // camera frame: x right, y down, z forward
  uint8_t label = sensor::kLabelBackground;
};

using LabeledPointCloud = std::vector<LabeledPoint>;

/**
 * Back-projects every non-sentinel pixel through the pinhole:
 * ((u-cx)/fx * d, (v-cy)/fy * d, d), carrying the pixel's label.
 */
inline LabeledPointCloud depth_to_pointcloud(const sensor::DepthImage& depth,
                                             const sensor::SemanticImage& sem,
                                             const sensor::Intrinsics& intr) {
  require(depth.width == sem.width && depth.height == sem.height,
          "depth/semantics dimension mismatch");
  LabeledPointCloud pc;
  pc.reserve(size_t(depth.width) * size_t(depth.height));
  for (int v = 0; v < depth.height; ++v) {
    double ky = (v - intr.cy) / intr.fy;
    for (int u = 0; u < depth.width; ++u) {
      float d = depth.at(u, v);
      if (!std::isfinite(d)) continue;
      double kx = (u - intr.cx) / intr.fx;
      pc.push_back({kx * double(d), ky * double(d), double(d), sem.at(u, v)});
    }
  }
  return pc;
}

namespace proj_detail {

// Points are pushed a hair along their ray so that hits landing exactly on a
// footprint boundary snap into the surface's own cell rather than the free
// neighbor (double rounding at 5 cm multiples is otherwise a coin flip).
inline constexpr double kAlongRayNudge = 5e-5;

inline constexpr uint32_t kVoxStructureBit = 1u << 15;

struct PoseBasis {
  double fx, fy, rx, ry, px, py, ch;
  explicit PoseBasis(const Pose& pose, double camera_height) {
    fx = std::cos(pose.theta);
    fy = std::sin(pose.theta);
    rx = fy;
    ry = -fx;
    px = pose.x;
    py = pose.y;
    ch = camera_height;
  }
};

/** Camera point -> (map cell, height slab). False when outside the band. */
inline bool project_point(const PoseBasis& b, const MapFrameRef& ref, double z_max,
                          double xc, double yc, double zc, Cell* cell, int* slab) {
  const double s = 1.0 + kAlongRayNudge;
  const double cx = xc * s, cy = yc * s, cz = zc * s;
  const double wx = b.px + cz * b.fx + cx * b.rx;
  const double wy = b.py + cz * b.fy + cx * b.ry;
  double wz = b.ch - cy;
  if (wz > z_max || wz < -0.01) return false;
  if (wz < 0.0) wz = 0.0;
  *cell = ref.world_to_cell({wx, wy});
  if (!ref.in_bounds(*cell)) return false;
  int nz = int(std::round(z_max / ref.cell));
  *slab = std::min(int(std::floor(wz / ref.cell)), nz - 1);
  return true;
}

}  // namespace proj_detail

/**
 * Per-label occupancy over 5 cm voxels. Planar indices are map cells offset
 * by (x0, y0); vertical slabs cover [0, z_max] above the floor. Bits 0..C-1
 * are categories, bit 15 marks structure (walls).
 */
struct VoxelGrid {
  int x0 = 0, y0 = 0;
  int nx = 0, ny = 0, nz = 0;
  std::vector<uint32_t> mask;

  uint32_t at(int ix, int iy, int iz) const {
    return mask[(size_t(iy) * nx + size_t(ix)) * size_t(nz) + size_t(iz)];
  }
  uint32_t& at(int ix, int iy, int iz) {
    return mask[(size_t(iy) * nx + size_t(ix)) * size_t(nz) + size_t(iz)];
  }
  bool occupied(int ix, int iy, int iz) const { return at(ix, iy, iz) != 0; }
};

/**
 * Transforms a camera-frame cloud into world voxels using the planar pose and
 * camera height; points outside the [0, z_max] band are discarded.
 */
inline VoxelGrid project_to_voxels(const LabeledPointCloud& pc, const Pose& pose,
                                   double camera_height, const MapFrameRef& ref,
                                   double z_max = 2.0) {
  proj_detail::PoseBasis basis(pose, camera_height);

  CellBox box;
  std::vector<std::pair<Cell, int>> hits;
  std::vector<uint32_t> bits;
  hits.reserve(pc.size());
  bits.reserve(pc.size());
  for (const auto& p : pc) {
    if (p.label == sensor::kLabelBackground) continue;
    Cell cell;
    int slab;
    if (!proj_detail::project_point(basis, ref, z_max, p.x, p.y, p.z, &cell, &slab))
      continue;
    uint32_t bit = p.label == sensor::kLabelStructure ? proj_detail::kVoxStructureBit
                                                      : (1u << p.label);
    hits.push_back({cell, slab});
    bits.push_back(bit);
    box.grow(cell.x, cell.y);
  }

  VoxelGrid vox;
  vox.nz = int(std::round(z_max / ref.cell));
  if (box.empty()) {
    vox.nx = vox.ny = 0;
    return vox;
  }
  vox.x0 = box.x0;
  vox.y0 = box.y0;
  vox.nx = box.width();
  vox.ny = box.height();
  vox.mask.assign(size_t(vox.nx) * size_t(vox.ny) * size_t(vox.nz), 0);
  for (size_t i = 0; i < hits.size(); ++i)
    vox.at(hits[i].first.x - vox.x0, hits[i].first.y - vox.y0, hits[i].second) |= bits[i];
  return vox;
}

/** Planar depth rays of one frame, used to carve explored free space. */
struct FrameRays {
  Vec2 origin;                        // camera position, world meters
  std::vector<std::array<double, 3>> rays;  // dirx, diry, clear z-depth
};

inline FrameRays make_frame_rays(const Pose& pose, const sensor::Intrinsics& intr,
                                 const std::vector<float>& column_clear) {
  FrameRays fr;
  fr.origin = pose.position();
  fr.rays.reserve(column_clear.size());
  double fx = std::cos(pose.theta), fy = std::sin(pose.theta);
  double rx = fy, ry = -fx;
  for (size_t u = 0; u < column_clear.size(); ++u) {
    double k = (double(u) - intr.cx) / intr.fx;
    fr.rays.push_back({fx + k * rx, fy + k * ry, double(column_clear[u])});
  }
  return fr;
}

namespace proj_detail {

/** Marks every cell the planar ray passes through for t in [0, clear]. */
template <class MarkFn>
inline void walk_ray(const MapFrameRef& ref, Vec2 origin, double dirx, double diry,
                     double clear, MarkFn&& mark) {
  // Continuous cell coordinates with boundaries on integers.
  double ux = (origin.x - ref.origin.x) / ref.cell + ref.size / 2 + 0.5;
  double uy = (origin.y - ref.origin.y) / ref.cell + ref.size / 2 + 0.5;
  int cx = int(std::floor(ux));
  int cy = int(std::floor(uy));
  const double sx = dirx / ref.cell, sy = diry / ref.cell;  // cells per unit t
  int step_x = sx > 0 ? 1 : -1;
  int step_y = sy > 0 ? 1 : -1;
  double t_max_x = sx != 0.0 ? ((sx > 0 ? std::floor(ux) + 1 - ux : ux - std::floor(ux)) /
                                std::abs(sx))
                             : std::numeric_limits<double>::infinity();
  double t_max_y = sy != 0.0 ? ((sy > 0 ? std::floor(uy) + 1 - uy : uy - std::floor(uy)) /
                                std::abs(sy))
                             : std::numeric_limits<double>::infinity();
  double t_delta_x = sx != 0.0 ? 1.0 / std::abs(sx) : 0.0;
  double t_delta_y = sy != 0.0 ? 1.0 / std::abs(sy) : 0.0;

  double t = 0.0;
  while (t <= clear) {
    mark(Cell{cx, cy});
    if (t_max_x < t_max_y) {
      t = t_max_x;
      t_max_x += t_delta_x;
      cx += step_x;
    } else {
      t = t_max_y;
      t_max_y += t_delta_y;
      cy += step_y;
    }
    if (t > clear) break;
  }
}

inline bool slab_in_obstacle_band(int slab, const MapConfig& cfg) {
  int lo = int(std::round(cfg.obstacle_z_min_m / cfg.cell_m));
  int hi = int(std::round(cfg.obstacle_z_max_m / cfg.cell_m));
  return slab >= lo && slab < hi;
}

}  // namespace proj_detail

/**
 * Collapses the voxel grid over height into the projected K-channel frame:
 * obstacle where the obstacle band is occupied, one bit per category at any
 * height, explored along every depth ray and wherever a hit landed.
 */
inline FrameMap voxels_to_map(const VoxelGrid& vox, const FrameRays& rays,
                              const MapFrameRef& ref, const MapConfig& cfg) {
  // Window: voxel bbox united with the farthest ray reach, padded.
  CellBox box;
  if (vox.nx > 0) {
    box.grow(vox.x0, vox.y0);
    box.grow(vox.x0 + vox.nx - 1, vox.y0 + vox.ny - 1);
  }
  Cell oc = ref.world_to_cell(rays.origin);
  box.grow(oc.x, oc.y);
  for (const auto& r : rays.rays) {
    Vec2 end{rays.origin.x + r[0] * r[2], rays.origin.y + r[1] * r[2]};
    Cell ec = ref.world_to_cell(end);
    box.grow(ec.x, ec.y);
  }
  box = box.expanded(4).clamped(ref.size, ref.size);

  FrameMap f;
  f.reset(box.x0, box.y0, box.width(), box.height());

  for (int iy = 0; iy < vox.ny; ++iy)
    for (int ix = 0; ix < vox.nx; ++ix) {
      uint32_t any = 0;
      bool obst = false;
      for (int iz = 0; iz < vox.nz; ++iz) {
        uint32_t m = vox.at(ix, iy, iz);
        if (!m) continue;
        any |= m;
        obst = obst || proj_detail::slab_in_obstacle_band(iz, cfg);
      }
      if (!any) continue;
      int x = vox.x0 + ix - f.x0, y = vox.y0 + iy - f.y0;
      if (x < 0 || x >= f.width() || y < 0 || y >= f.height()) continue;
      if (obst) f.obstacle.at(x, y) = 1;
      f.explored.at(x, y) = 1;
      f.categories.at(x, y) =
          uint16_t(f.categories.at(x, y) | (any & ~proj_detail::kVoxStructureBit));
    }

  for (const auto& r : rays.rays)
    proj_detail::walk_ray(ref, rays.origin, r[0], r[1], r[2], [&](Cell c) {
      int x = c.x - f.x0, y = c.y - f.y0;
      if (x >= 0 && x < f.width() && y >= 0 && y < f.height()) f.explored.at(x, y) = 1;
    });
  return f;
}

/**
 * Fused projection of a rendered frame straight into a FrameMap window
 * centered on the agent. Bit-identical to depth_to_pointcloud +
 * project_to_voxels + voxels_to_map, without materializing either
 * intermediate; this is the per-step path in the episode runner.
 */
inline void project_frame_into(const sensor::RenderedFrame& frame, const Pose& pose,
                               const sensor::Intrinsics& intr, double camera_height,
                               const MapFrameRef& ref, const MapConfig& cfg,
                               FrameMap& out) {
  proj_detail::PoseBasis basis(pose, camera_height);
  Cell agent = ref.world_to_cell(pose.position());
  // Max planar reach: max z-depth at the frame corner plus slack.
  int halfw = int(std::ceil(5.0 * std::sqrt(2.0) / ref.cell)) + 8;
  CellBox box{agent.x - halfw, agent.y - halfw, agent.x + halfw, agent.y + halfw};
  box = box.clamped(ref.size, ref.size);
  out.reset(box.x0, box.y0, box.width(), box.height());

  const auto& depth = frame.depth;
  const auto& sem = frame.semantics;
  for (int v = 0; v < depth.height; ++v) {
    double ky = (v - intr.cy) / intr.fy;
    for (int u = 0; u < depth.width; ++u) {
      float d = depth.z[size_t(v) * depth.width + u];
      if (!std::isfinite(d)) continue;
      uint8_t label = sem.labels[size_t(v) * sem.width + u];
      if (label == sensor::kLabelBackground) continue;
      double kx = (u - intr.cx) / intr.fx;
      Cell cell;
      int slab;
      if (!proj_detail::project_point(basis, ref, cfg.voxel_z_max_m, kx * double(d),
                                      ky * double(d), double(d), &cell, &slab))
        continue;
      int x = cell.x - out.x0, y = cell.y - out.y0;
      if (x < 0 || x >= out.width() || y < 0 || y >= out.height()) continue;
      out.explored.at(x, y) = 1;
      if (proj_detail::slab_in_obstacle_band(slab, cfg)) out.obstacle.at(x, y) = 1;
      if (label < cfg.num_categories)
        out.categories.at(x, y) = uint16_t(out.categories.at(x, y) | (1u << label));
    }
  }

  double fx = std::cos(pose.theta), fy = std::sin(pose.theta);
  double rx = fy, ry = -fx;
  for (size_t u = 0; u < frame.column_clear.size(); ++u) {
    double k = (double(u) - intr.cx) / intr.fx;
    proj_detail::walk_ray(ref, pose.position(), fx + k * rx, fy + k * ry,
                          double(frame.column_clear[u]), [&](Cell c) {
                            int x = c.x - out.x0, y = c.y - out.y0;
                            if (x >= 0 && x < out.width() && y >= 0 && y < out.height())
                              out.explored.at(x, y) = 1;
                          });
  }
}

}  // namespace semnav::mapping
