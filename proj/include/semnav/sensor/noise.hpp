#pragma once

#include <vector>

#include "semnav/core/error.hpp"
#include "semnav/core/rng.hpp"
#include "semnav/sensor/render.hpp"
#include "semnav/world/categories.hpp"

namespace semnav::sensor {

/** Detector-style segmentation corruption, applied per connected component. */
struct NoiseParams {
  double miss_rate = 0.0;       // component dropped to background
  double confusion_rate = 0.0;  // component relabeled to a random other category
  int boundary_erosion_px = 0;

  void validate() const {
    require(miss_rate >= 0.0 && miss_rate <= 1.0, "miss_rate must be in [0,1]");
    require(confusion_rate >= 0.0 && confusion_rate <= 1.0,
            "confusion_rate must be in [0,1]");
    require(boundary_erosion_px >= 0, "boundary_erosion_px must be >= 0");
  }
  bool identity() const {
    return miss_rate == 0.0 && confusion_rate == 0.0 && boundary_erosion_px == 0;
  }
};

/**
 * Corrupts category components independently: dropped with miss_rate,
 * relabeled with confusion_rate, then eroded at the boundary. Components are
 * 4-connected same-label pixel sets, visited in scan order of their first
 * pixel, so the output is a pure function of (image, seed). Structure and
 * background pixels pass through untouched. The depth image rides along for
 * interface symmetry with the renderer but takes no part in the corruption.
 */
inline SemanticImage corrupt_segmentation(const SemanticImage& sem, const DepthImage& depth,
                                          Rng& rng, const NoiseParams& noise) {
  noise.validate();
  (void)depth;
  SemanticImage out = sem;
  if (noise.identity()) return out;

  const int W = sem.width, H = sem.height;
  std::vector<int32_t> comp(size_t(W) * H, -1);
  std::vector<Cell> stack;
  std::vector<Cell> pixels;

  int32_t next_comp = 0;
  for (int v0 = 0; v0 < H; ++v0) {
    for (int u0 = 0; u0 < W; ++u0) {
      size_t idx0 = size_t(v0) * W + u0;
      uint8_t lab = sem.labels[idx0];
      if (lab >= world::kNumCategories || comp[idx0] >= 0) continue;

      // Flood this component.
      pixels.clear();
      stack.assign(1, Cell{u0, v0});
      comp[idx0] = next_comp;
      while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        pixels.push_back(c);
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int nu = c.x + dx[k], nv = c.y + dy[k];
          if (nu < 0 || nu >= W || nv < 0 || nv >= H) continue;
          size_t nidx = size_t(nv) * W + nu;
          if (sem.labels[nidx] == lab && comp[nidx] < 0) {
            comp[nidx] = next_comp;
            stack.push_back({nu, nv});
          }
        }
      }
      ++next_comp;

      bool dropped = rng.bernoulli(noise.miss_rate);
      uint8_t new_label = lab;
      if (!dropped && rng.bernoulli(noise.confusion_rate)) {
        int other = int(rng.uniform_int(uint64_t(world::kNumCategories - 1)));
        new_label = uint8_t(other >= lab ? other + 1 : other);
      }

      if (dropped) {
        for (auto c : pixels) out.labels[size_t(c.y) * W + c.x] = kLabelBackground;
        continue;
      }
      if (new_label != lab)
        for (auto c : pixels) out.labels[size_t(c.y) * W + c.x] = new_label;

      // Peel boundary_erosion_px rings off the component.
      std::vector<Cell> current = pixels;
      for (int round = 0; round < noise.boundary_erosion_px && !current.empty(); ++round) {
        std::vector<Cell> keep;
        keep.reserve(current.size());
        std::vector<Cell> peeled;
        for (auto c : current) {
          bool edge = false;
          const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
          for (int k = 0; k < 4 && !edge; ++k) {
            int nu = c.x + dx[k], nv = c.y + dy[k];
            edge = nu < 0 || nu >= W || nv < 0 || nv >= H ||
                   out.labels[size_t(nv) * W + nu] != new_label;
          }
          (edge ? peeled : keep).push_back(c);
        }
        for (auto c : peeled) out.labels[size_t(c.y) * W + c.x] = kLabelBackground;
        current = std::move(keep);
      }
    }
  }
  return out;
}

/** Odometry deltas between consecutive poses, optionally with Gaussian noise. */
struct PoseNoiseParams {
  double sigma_trans_m = 0.0;
  double sigma_rot_rad = 0.0;

  bool identity() const { return sigma_trans_m == 0.0 && sigma_rot_rad == 0.0; }
};

/** (dx, dy, dtheta) expressed in the previous pose's frame. */
struct PoseReading {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;

  bool operator==(const PoseReading&) const = default;
};

inline PoseReading pose_reading(const Pose& true_prev, const Pose& true_curr,
                                const PoseNoiseParams& noise, Rng& rng) {
  double wx = true_curr.x - true_prev.x;
  double wy = true_curr.y - true_prev.y;
  double c = std::cos(true_prev.theta), s = std::sin(true_prev.theta);
  PoseReading r;
  r.dx = c * wx + s * wy;
  r.dy = -s * wx + c * wy;
  r.dtheta = wrap_angle(true_curr.theta - true_prev.theta);
  if (!noise.identity()) {
    r.dx += rng.gaussian(noise.sigma_trans_m);
    r.dy += rng.gaussian(noise.sigma_trans_m);
    r.dtheta = wrap_angle(r.dtheta + rng.gaussian(noise.sigma_rot_rad));
  }
  return r;
}

}  // namespace semnav::sensor
