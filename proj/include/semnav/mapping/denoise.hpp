#pragma once

#include "semnav/core/morphology.hpp"
#include "semnav/mapping/semantic_map.hpp"

namespace semnav::mapping {

/**
 * Morphological cleanup of a projected frame before aggregation. Opening
 * strips detector specks, closing fills the unobserved slivers between a
 * footprint's faces. The explored channel is never touched. Defaults keep
 * opening off: real walls are a single cell thick and would not survive it.
 */
struct DenoiseParams {
  double obstacle_open_radius = 0.0;
  double obstacle_close_radius = 2.0;
  double category_open_radius = 0.0;
  double category_close_radius = 2.0;

  bool operator==(const DenoiseParams&) const = default;
};

namespace denoise_detail {

inline void run_plane(Grid2D<uint8_t>& plane, double open_r, double close_r) {
  if (open_r > 0.0) plane = morph_open(plane, open_r);
  if (close_r > 0.0) plane = morph_close(plane, close_r);
}

}  // namespace denoise_detail

inline void denoise_frame(FrameMap& f, const DenoiseParams& p) {
  denoise_detail::run_plane(f.obstacle, p.obstacle_open_radius, p.obstacle_close_radius);

  uint16_t present = 0;
  for (size_t i = 0; i < f.categories.size(); ++i) present |= f.categories[i];
  if (!present) return;

  Grid2D<uint8_t> plane(f.width(), f.height(), 0);
  for (int c = 0; present >> c; ++c) {
    if (!(present >> c & 1u)) continue;
    const uint16_t bit = uint16_t(1u << c);
    for (size_t i = 0; i < f.categories.size(); ++i)
      plane[i] = (f.categories[i] & bit) ? 1 : 0;
    denoise_detail::run_plane(plane, p.category_open_radius, p.category_close_radius);
    for (size_t i = 0; i < f.categories.size(); ++i)
      f.categories[i] = uint16_t(plane[i] ? (f.categories[i] | bit)
                                          : (f.categories[i] & ~bit));
  }
}

/** Pure form of the per-frame denoiser. Idempotent for fixed params. */
inline FrameMap denoise_map(const FrameMap& frame, const DenoiseParams& p) {
  FrameMap out = frame;
  denoise_frame(out, p);
  return out;
}

}  // namespace semnav::mapping
