#pragma once

#include <cmath>

#include "semnav/core/error.hpp"
#include "semnav/core/geometry.hpp"

namespace semnav::sensor {

/** Pinhole intrinsics; fx is derived from the horizontal field of view. */
struct Intrinsics {
  int width = 640;
  int height = 480;
  double fx = 0;
  double fy = 0;
  double cx = 0;
  double cy = 0;

  bool operator==(const Intrinsics&) const = default;
};

inline Intrinsics make_intrinsics(double hfov_deg = 90.0, int width = 640,
                                  int height = 480) {
  require(hfov_deg > 0 && hfov_deg < 180, "hfov must be in (0, 180)");
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.fx = (width / 2.0) / std::tan(hfov_deg * kPi / 180.0 / 2.0);
  k.fy = k.fx;
  k.cx = width / 2.0 - 0.5;
  k.cy = height / 2.0 - 0.5;
  return k;
}

struct SensorConfig {
  double hfov_deg = 90.0;
  double camera_height_m = 0.88;
  double max_depth_m = 5.0;

  bool operator==(const SensorConfig&) const = default;
};

}  // namespace semnav::sensor
