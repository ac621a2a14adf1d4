#pragma once

#include <cmath>

#include "semnav/core/geometry.hpp"
#include "semnav/sensor/noise.hpp"

namespace semnav::mapping {

/** Dead-reckoning composition of an odometry reading onto a pose. */
inline Pose update_pose(const Pose& prev, const sensor::PoseReading& r) {
  double c = std::cos(prev.theta), s = std::sin(prev.theta);
  Pose next;
  next.x = prev.x + c * r.dx - s * r.dy;
  next.y = prev.y + s * r.dx + c * r.dy;
  next.theta = wrap_angle(prev.theta + r.dtheta);
  return next;
}

}  // namespace semnav::mapping
