#pragma once

#include <cmath>

#include "semnav/core/geometry.hpp"
#include "semnav/mapping/semantic_map.hpp"
#include "semnav/planning/fmm.hpp"
#include "semnav/planning/inflate.hpp"
#include "semnav/world/geodesic.hpp"

namespace semnav::planning {

enum class LocalAction { kMoveForward, kTurnLeft, kTurnRight, kReplan };

inline const char* to_string(LocalAction a) {
  switch (a) {
    case LocalAction::kMoveForward: return "move_forward";
    case LocalAction::kTurnLeft: return "turn_left";
    case LocalAction::kTurnRight: return "turn_right";
    default: return "replan";
  }
}

/** True when every cell swept by a forward step at this heading is passable.
 *  Samples carry a 1 nm bias so points landing exactly on a cell boundary
 *  resolve to the same side no matter how the heading was accumulated. */
inline bool forward_sweep_free(const Grid2D<uint8_t>& traversable,
                               const mapping::MapFrameRef& ref, const Pose& pose,
                               double heading, double dist_m) {
  constexpr double kBoundaryBias = 1e-9;
  double cx = std::cos(heading), sy = std::sin(heading);
  int samples = std::max(2, int(std::ceil(dist_m / (ref.cell * 0.5))));
  for (int i = 1; i <= samples; ++i) {
    double d = dist_m * double(i) / samples;
    Cell c = ref.world_to_cell(
        {pose.x + d * cx + kBoundaryBias, pose.y + d * sy + kBoundaryBias});
    if (!traversable.in_bounds(c) || !traversable.at(c)) return false;
  }
  return true;
}

/**
 * Steepest-descent step selection on a travel-time field. Central differences
 * at the agent cell (one-sided against unreachable neighbors) give the
 * descent direction; the agent moves forward when its heading is within half
 * a turn of that direction and the step ahead is clear, and otherwise turns
 * toward the nearest clear heading on its turn lattice, ties to the left.
 * Pure in (field, traversability, pose), so no turn hysteresis is needed.
 */
inline LocalAction next_action(const Grid2D<double>& field,
                               const Grid2D<uint8_t>& traversable, const Pose& pose,
                               const mapping::MapFrameRef& ref, double forward_step_m,
                               double turn_angle_rad) {
  Cell c = ref.world_to_cell(pose.position());
  if (!field.in_bounds(c)) return LocalAction::kReplan;

  auto value = [&](int x, int y) {
    return field.in_bounds(x, y) ? field.at(x, y) : kUnreachable;
  };
  double tc = value(c.x, c.y);
  double tl = value(c.x - 1, c.y), tr = value(c.x + 1, c.y);
  double td = value(c.x, c.y - 1), tu = value(c.x, c.y + 1);

  double gx, gy;
  if (std::isfinite(tc)) {
    if (std::isfinite(tl) && std::isfinite(tr)) gx = (tr - tl) / 2.0;
    else if (std::isfinite(tr)) gx = tr - tc;
    else if (std::isfinite(tl)) gx = tc - tl;
    else gx = 0.0;
    if (std::isfinite(td) && std::isfinite(tu)) gy = (tu - td) / 2.0;
    else if (std::isfinite(tu)) gy = tu - tc;
    else if (std::isfinite(td)) gy = tc - td;
    else gy = 0.0;
  } else {
    // Field unknown at the agent: descend toward the smallest finite neighbor.
    double best = kUnreachable;
    gx = gy = 0.0;
    if (tr < best) { best = tr; gx = -1.0; gy = 0.0; }
    if (tl < best) { best = tl; gx = 1.0; gy = 0.0; }
    if (tu < best) { best = tu; gx = 0.0; gy = -1.0; }
    if (td < best) { best = td; gx = 0.0; gy = 1.0; }
    if (!std::isfinite(best)) return LocalAction::kReplan;
  }
  if (gx == 0.0 && gy == 0.0) return LocalAction::kReplan;

  double descent = std::atan2(-gy, -gx);

  // Candidate headings on the agent's turn lattice, nearest-to-descent first
  // (ties prefer fewer turns, then the left side).
  int half_turns = int(std::ceil(kPi / turn_angle_rad));
  int best_k = 0;
  double best_score = kUnreachable;
  bool found = false;
  for (int k = -half_turns; k <= half_turns; ++k) {
    double heading = pose.theta + k * turn_angle_rad;
    if (!forward_sweep_free(traversable, ref, pose, heading, forward_step_m)) continue;
    double off = std::abs(wrap_angle(heading - descent));
    double score = off + std::abs(k) * 1e-6 - (k > 0 ? 1e-9 : 0.0);
    if (score < best_score) {
      best_score = score;
      best_k = k;
      found = true;
    }
  }
  double err = wrap_angle(descent - pose.theta);
  if (!found) {
    // Nothing passable in any heading: spin toward the descent direction and
    // wait for the map to change.
    return err >= 0.0 ? LocalAction::kTurnLeft : LocalAction::kTurnRight;
  }
  if (best_k == 0) {
    if (std::abs(err) <= turn_angle_rad / 2.0 + 1e-9) return LocalAction::kMoveForward;
    // The descent heading itself is blocked but straight ahead is clear and
    // closest to it: step forward rather than oscillate.
    return LocalAction::kMoveForward;
  }
  return best_k > 0 ? LocalAction::kTurnLeft : LocalAction::kTurnRight;
}

/**
 * Agent-side stop trigger: some cell of the goal channel lies within the
 * success distance of the agent, Euclidean over cell centers. Works off the
 * map belief, so segmentation errors translate into wrong stops.
 */
inline bool reached_stop(const mapping::SemanticMap& m, const Pose& pose, int goal_category,
                         double d_s = 1.0) {
  const auto& ref = m.frame_ref();
  const auto& chan = m.category(goal_category);
  const CellBox& box = m.channel_box(mapping::kChanCategory0 + goal_category);
  if (box.empty()) return false;

  Cell a = ref.world_to_cell(pose.position());
  int r = int(std::ceil(d_s / ref.cell)) + 1;
  CellBox scan{a.x - r, a.y - r, a.x + r, a.y + r};
  scan = scan.clamped(ref.size, ref.size);
  scan.x0 = std::max(scan.x0, box.x0);
  scan.y0 = std::max(scan.y0, box.y0);
  scan.x1 = std::min(scan.x1, box.x1);
  scan.y1 = std::min(scan.y1, box.y1);

  const double d2 = (d_s / ref.cell) * (d_s / ref.cell);
  for (int y = scan.y0; y <= scan.y1; ++y)
    for (int x = scan.x0; x <= scan.x1; ++x) {
      if (chan.at(x, y) <= 0.0f) continue;
      double dx = x - a.x, dy = y - a.y;
      if (dx * dx + dy * dy <= d2 + 1e-9) return true;
    }
  return false;
}

inline void stamp_clearance(Grid2D<uint8_t>& t, Cell c, double radius_cells) {
  for (auto o : disk_offsets(radius_cells)) {
    int nx = c.x + o.x, ny = c.y + o.y;
    if (t.in_bounds(nx, ny)) t.at(nx, ny) = 1;
  }
}

/** Incremental form of inflate_obstacles: block the disk around one new cell. */
inline void stamp_blocked(Grid2D<uint8_t>& t, Cell c, double radius_cells) {
  for (auto o : disk_offsets(radius_cells)) {
    int nx = c.x + o.x, ny = c.y + o.y;
    if (t.in_bounds(nx, ny)) t.at(nx, ny) = 0;
  }
}

/**
 * Traversability used for one replan: inflated map obstacles, with clearance
 * stamped free around the agent (it is physically there) and around the goal
 * cells (footprints sit inside their own inflation shell). Mirrors the
 * clearance the geodesic oracle applies, so planner and metric agree.
 */
inline Grid2D<uint8_t> plan_traversability(const Grid2D<float>& obstacle_channel,
                                           double inflate_radius_cells, Cell agent,
                                           const std::vector<Cell>& goal_cells) {
  Grid2D<uint8_t> t = inflate_obstacles(obstacle_channel, inflate_radius_cells);
  stamp_clearance(t, agent, inflate_radius_cells);
  for (auto g : goal_cells) stamp_clearance(t, g, world::kGoalApproachClearanceCells);
  return t;
}

}  // namespace semnav::planning
