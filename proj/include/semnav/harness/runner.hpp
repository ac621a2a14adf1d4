#pragma once

#include <string>
#include <vector>

#include "semnav/harness/metrics.hpp"
#include "semnav/mapping/denoise.hpp"
#include "semnav/mapping/odometry.hpp"
#include "semnav/mapping/projection.hpp"
#include "semnav/mapping/semantic_map.hpp"
#include "semnav/planning/fmm.hpp"
#include "semnav/planning/local.hpp"
#include "semnav/policy/select.hpp"
#include "semnav/sensor/noise.hpp"
#include "semnav/sensor/render.hpp"
#include "semnav/world/episode.hpp"
#include "semnav/world/geodesic.hpp"

namespace semnav::harness {

struct MotionParams {
  double forward_step_m = 0.25;
  double turn_angle_deg = 30.0;
  int max_steps = 500;
  double success_dist_m = 1.0;  // d_s
  int goal_period = 25;         // u

  double turn_angle_rad() const { return turn_angle_deg * kPi / 180.0; }
};

struct EpisodeConfig {
  MotionParams motion;
  sensor::SensorConfig sensor;
  mapping::MapConfig map;
  mapping::DenoiseParams denoise;
  policy::SelectParams select;
  sensor::NoiseParams seg_noise;        // identity unless corruption is on
  sensor::PoseNoiseParams pose_noise;   // identity: paper setting
  bool corrupt_segmentation = false;
  bool success_geodesic = false;  // sensitivity switch: geodesic success check
};

enum class Action : uint8_t { kMoveForward, kTurnLeft, kTurnRight, kStop };

inline const char* to_string(Action a) {
  switch (a) {
    case Action::kMoveForward: return "move_forward";
    case Action::kTurnLeft: return "turn_left";
    case Action::kTurnRight: return "turn_right";
    default: return "stop";
  }
}

struct GoalSelectionRecord {
  int step = 0;
  std::vector<Cell> cells;
  bool exhausted = false;
};

struct EpisodeResult {
  bool success = false;
  bool stop_issued = false;
  bool goal_absent = false;  // scene carries no instance of the goal category
  double path_length_m = 0.0;
  double shortest_length_m = 0.0;
  double dts_m = 0.0;
  int steps = 0;
  int collisions = 0;
  std::vector<Pose> trajectory;  // steps + 1 poses
  std::vector<Action> actions;   // one per step
  std::vector<GoalSelectionRecord> goal_selections;
};

/**
 * Runs one episode of the full loop: render, (optionally corrupt), build the
 * map, pick a long-term goal every goal_period steps, replan with fast
 * marching every step, act, and stop when the map says the goal is within
 * reach. Ground truth only touches the loop through the sensor, through
 * collision checks, and through the final success evaluation. Scratch buffers
 * persist across runs, so keep one runner per worker thread.
 */
class EpisodeRunner {
 public:
  EpisodeResult run(const world::Scene& scene, const world::GeodesicOracle& oracle,
                    const world::EpisodeSpec& spec, policy::PolicyKind kind,
                    const policy::PriorTable& prior, const EpisodeConfig& cfg,
                    uint64_t seed) {
    const auto& motion = cfg.motion;
    const double turn = motion.turn_angle_rad();
    const double cell = cfg.map.cell_m;
    const int M = cfg.map.size_cells;
    const auto intr = sensor::make_intrinsics(cfg.sensor.hfov_deg);

    // Map geometry guard: every scene corner must stay on the map.
    {
      double max_dx = std::max(spec.start.x, scene.width_m - spec.start.x);
      double max_dy = std::max(spec.start.y, scene.height_m - spec.start.y);
      double reach = std::max(max_dx, max_dy) / cell + 4;
      require(reach < M / 2.0,
              format_msg("map of %d cells cannot hold this scene from the start pose "
                         "(needs M=%d)",
                         M, int(2 * reach) + 2));
    }

    EpisodeResult result;
    result.goal_absent = true;
    for (const auto& o : scene.objects)
      if (o.category == spec.goal_category) result.goal_absent = false;

    mapping::SemanticMap map(cfg.map, spec.start.position());
    const mapping::MapFrameRef& ref = map.frame_ref();

    // Incrementally maintained traversability: fields plan with a margin,
    // step feasibility uses the physical radius.
    const double plan_r = world::kPlannerInflationM / cell;
    const double move_r = world::kAgentRadiusM / cell;
    plan_trav_ = Grid2D<uint8_t>(M, M, 1);
    move_trav_ = Grid2D<uint8_t>(M, M, 1);

    Pose true_pose = spec.start;
    Pose believed = spec.start;
    Pose prev_true = spec.start;

    Rng policy_rng = Rng::derive(seed, {0xB0A7});
    result.trajectory.push_back(true_pose);

    policy::LongTermGoal goal;
    bool have_goal = false;

    const auto& gt_move = oracle.traversable();  // physical collision grid
    world::GroundTruthGrid const& gt = oracle.ground_truth();

    if (!result.goal_absent)
      result.shortest_length_m =
          oracle.cached_category_field(spec.goal_category)
              .at(gt.cell_of(spec.start.position()));

    int step_index = 0;
    while (step_index < motion.max_steps) {
      // Sense at the true pose, register at the believed pose.
      sensor::render_frame_into(scene, true_pose, intr, cfg.sensor, frame_);
      if (cfg.corrupt_segmentation && !cfg.seg_noise.identity()) {
        Rng noise_rng = Rng::derive(seed, {0xC0DE, uint64_t(step_index)});
        frame_.semantics =
            sensor::corrupt_segmentation(frame_.semantics, frame_.depth, noise_rng,
                                         cfg.seg_noise);
      }
      if (step_index > 0) {
        Rng odo_rng = Rng::derive(seed, {0x0D0, uint64_t(step_index)});
        auto reading = sensor::pose_reading(prev_true, true_pose, cfg.pose_noise, odo_rng);
        believed = mapping::update_pose(believed, reading);
      }
      prev_true = true_pose;

      mapping::project_frame_into(frame_, believed, intr, cfg.sensor.camera_height_m, ref,
                                  cfg.map, frame_map_);
      mapping::denoise_frame(frame_map_, cfg.denoise);
      new_obstacles_.clear();
      apply_frame_tracking(map, frame_map_, &new_obstacles_);
      for (Cell c : new_obstacles_) {
        planning::stamp_blocked(plan_trav_, c, plan_r);
        planning::stamp_blocked(move_trav_, c, move_r);
      }

      if (step_index % motion.goal_period == 0) {
        goal = policy::select_long_term_goal(map, believed, spec.goal_category, kind, prior,
                                             policy_rng, cfg.select);
        have_goal = true;
        result.goal_selections.push_back({step_index, goal.cells, goal.exhausted});
      }

      if (planning::reached_stop(map, believed, spec.goal_category, motion.success_dist_m)) {
        result.actions.push_back(Action::kStop);
        result.trajectory.push_back(true_pose);
        result.stop_issued = true;
        ++step_index;
        break;
      }

      // Per-step replan from the current map.
      Action act = Action::kTurnLeft;
      if (have_goal && !goal.cells.empty()) {
        Cell agent = ref.world_to_cell(believed.position());
        plan_scratch_ = plan_trav_;
        planning::stamp_clearance(plan_scratch_, agent, plan_r + 1.0);
        for (Cell c : goal.cells)
          planning::stamp_clearance(plan_scratch_, c, world::kGoalApproachClearanceCells);
        move_scratch_ = move_trav_;
        planning::stamp_clearance(move_scratch_, agent, move_r + 1.0);
        for (Cell c : goal.cells)
          planning::stamp_clearance(move_scratch_, c, world::kGoalApproachClearanceCells);

        planning::FmmOptions opt;
        CellBox window = map.channel_box(mapping::kChanExplored);
        window.grow(agent.x, agent.y);
        for (Cell c : goal.cells) window.grow(c.x, c.y);
        opt.window = window.expanded(40).clamped(M, M);
        opt.stop_cells = {agent, {agent.x + 1, agent.y}, {agent.x - 1, agent.y},
                          {agent.x, agent.y + 1}, {agent.x, agent.y - 1}};
        marcher_.compute_into(plan_scratch_, goal.cells, cell, opt, field_);

        auto local = planning::next_action(field_, move_scratch_, believed, ref,
                                           motion.forward_step_m, turn);
        switch (local) {
          case planning::LocalAction::kMoveForward: act = Action::kMoveForward; break;
          case planning::LocalAction::kTurnRight: act = Action::kTurnRight; break;
          case planning::LocalAction::kTurnLeft: act = Action::kTurnLeft; break;
          default: act = Action::kTurnLeft; break;  // replan-required: spin and rescan
        }
      }

      // Execute against ground truth. Collisions block in place.
      if (act == Action::kMoveForward) {
        if (gt_sweep_free(gt, gt_move, true_pose, motion.forward_step_m)) {
          true_pose.x += motion.forward_step_m * std::cos(true_pose.theta);
          true_pose.y += motion.forward_step_m * std::sin(true_pose.theta);
          result.path_length_m += motion.forward_step_m;
        } else {
          ++result.collisions;
        }
      } else if (act == Action::kTurnLeft) {
        true_pose.theta = wrap_angle(true_pose.theta + turn);
      } else if (act == Action::kTurnRight) {
        true_pose.theta = wrap_angle(true_pose.theta - turn);
      }
      result.actions.push_back(act);
      result.trajectory.push_back(true_pose);
      ++step_index;
    }

    result.steps = step_index;

    // Ground-truth evaluation of the outcome.
    std::vector<world::ObjectInstance> goal_instances;
    for (const auto& o : scene.objects)
      if (o.category == spec.goal_category) goal_instances.push_back(o);
    if (!goal_instances.empty()) {
      double dist;
      if (cfg.success_geodesic) {
        dist = oracle.cached_category_field(spec.goal_category)
                   .at(gt.cell_of(true_pose.position()));
      } else {
        dist = std::numeric_limits<double>::infinity();
        for (const auto& o : goal_instances)
          dist = std::min(dist, o.footprint.distance_to(true_pose.position()));
      }
      result.success = result.stop_issued && dist < motion.success_dist_m;
      result.dts_m = metric_dts(true_pose.position(), goal_instances, motion.success_dist_m);
    } else {
      result.success = false;
      result.dts_m = std::numeric_limits<double>::infinity();
    }
    return result;
  }

 private:
  /** apply_frame that also reports which obstacle cells turned on. */
  static void apply_frame_tracking(mapping::SemanticMap& map, const mapping::FrameMap& f,
                                   std::vector<Cell>* new_obstacles) {
    const auto& before = map.obstacle();
    const int M = map.config().size_cells;
    for (int y = 0; y < f.height(); ++y) {
      int my = f.y0 + y;
      if (my < 0 || my >= M) continue;
      for (int x = 0; x < f.width(); ++x) {
        if (!f.obstacle.at(x, y)) continue;
        int mx = f.x0 + x;
        if (mx < 0 || mx >= M) continue;
        if (before.at(mx, my) <= 0.0f) new_obstacles->push_back({mx, my});
      }
    }
    map.apply_frame(f);
  }

  /** Physical collision: the swept forward step on the inflated ground truth. */
  static bool gt_sweep_free(const world::GroundTruthGrid& gt,
                            const Grid2D<uint8_t>& traversable, const Pose& pose,
                            double dist_m) {
    constexpr double kBoundaryBias = 1e-9;
    double cx = std::cos(pose.theta), sy = std::sin(pose.theta);
    int samples = std::max(2, int(std::ceil(dist_m / (gt.cell_m * 0.5))));
    for (int i = 1; i <= samples; ++i) {
      double d = dist_m * double(i) / samples;
      Cell c = gt.cell_of(
          {pose.x + d * cx + kBoundaryBias, pose.y + d * sy + kBoundaryBias});
      if (!traversable.in_bounds(c) || !traversable.at(c)) return false;
    }
    return true;
  }

  sensor::RenderedFrame frame_;
  mapping::FrameMap frame_map_;
  planning::FastMarcher marcher_;
  Grid2D<double> field_;
  Grid2D<uint8_t> plan_trav_, move_trav_, plan_scratch_, move_scratch_;
  std::vector<Cell> new_obstacles_;
};

}  // namespace semnav::harness
