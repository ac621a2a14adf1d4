#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "semnav/harness/benchmark.hpp"

namespace semnav::harness {

// Benchmark configuration schema (JSON). Every task constant is a named key
// with its stock default: success_dist_m (d_s), goal_period (u), max_steps,
// cell_m, map_size_cells (M); the channel count K is always categories + 2.

inline world::SceneParams scene_params_from_json(const nlohmann::json& j) {
  world::SceneParams p;
  if (j.contains("extent_m")) {
    p.extent_w_m = j.at("extent_m").at(0).get<double>();
    p.extent_h_m = j.at("extent_m").at(1).get<double>();
  }
  if (j.contains("rooms")) {
    p.rooms_min = j.at("rooms").at(0).get<int>();
    p.rooms_max = j.at("rooms").at(1).get<int>();
  }
  if (j.contains("object_density")) p.object_density = j.at("object_density").get<double>();
  if (j.contains("lambda")) p.lambda = j.at("lambda").get<double>();
  if (j.contains("exclude_category"))
    p.exclude_category = world::category_from_name(j.at("exclude_category").get<std::string>());
  return p;
}

inline nlohmann::json scene_params_to_json(const world::SceneParams& p) {
  nlohmann::json j;
  j["extent_m"] = {p.extent_w_m, p.extent_h_m};
  j["rooms"] = {p.rooms_min, p.rooms_max};
  j["object_density"] = p.object_density;
  j["lambda"] = p.lambda;
  if (p.exclude_category >= 0)
    j["exclude_category"] = world::category_name(p.exclude_category);
  return j;
}

inline BenchConfig bench_config_from_json(const nlohmann::json& j) {
  BenchConfig cfg;
  try {
    cfg.seed = j.value("seed", uint64_t(1));
    if (j.contains("scenes")) {
      const auto& js = j.at("scenes");
      cfg.scene_count = js.value("count", cfg.scene_count);
      cfg.scene_seed0 = js.value("seed", cfg.scene_seed0);
      if (js.contains("params")) cfg.scene_params = scene_params_from_json(js.at("params"));
    }
    cfg.episodes_per_scene = j.value("episodes_per_scene", cfg.episodes_per_scene);
    if (j.contains("methods")) {
      for (const auto& jm : j.at("methods")) {
        BenchMethod m;
        if (jm.is_string()) {
          m.label = jm.get<std::string>();
          m.kind = policy::policy_kind_from_name(m.label);
        } else {
          m.kind = policy::policy_kind_from_name(jm.at("kind").get<std::string>());
          m.label = jm.value("label", std::string(policy::to_string(m.kind)));
          m.corrupt_segmentation = jm.value("corrupt_segmentation", false);
        }
        cfg.methods.push_back(m);
      }
    }
    if (j.contains("prior")) {
      const auto& jp = j.at("prior");
      cfg.prior_file = jp.value("file", std::string());
      cfg.train_scene_count = jp.value("train_count", cfg.train_scene_count);
      cfg.train_scene_seed0 = jp.value("train_seed", cfg.train_scene_seed0);
      cfg.fit.tau_m = jp.value("tau_m", cfg.fit.tau_m);
      cfg.fit.shuffles = jp.value("shuffles", cfg.fit.shuffles);
    }
    if (j.contains("motion")) {
      const auto& jm = j.at("motion");
      auto& mp = cfg.episode.motion;
      mp.forward_step_m = jm.value("forward_step_m", mp.forward_step_m);
      mp.turn_angle_deg = jm.value("turn_angle_deg", mp.turn_angle_deg);
      mp.max_steps = jm.value("max_steps", mp.max_steps);
      mp.success_dist_m = jm.value("success_dist_m", mp.success_dist_m);
      mp.goal_period = jm.value("goal_period", mp.goal_period);
      require(mp.forward_step_m > 0 && mp.turn_angle_deg > 0 && mp.max_steps > 0 &&
                  mp.success_dist_m > 0 && mp.goal_period > 0,
              "motion parameters must be positive");
    }
    if (j.contains("map")) {
      const auto& jm = j.at("map");
      cfg.episode.map.size_cells = jm.value("size_cells", cfg.episode.map.size_cells);
      cfg.episode.map.cell_m = jm.value("cell_m", cfg.episode.map.cell_m);
    }
    if (j.contains("sensor")) {
      const auto& js = j.at("sensor");
      cfg.episode.sensor.hfov_deg = js.value("hfov_deg", cfg.episode.sensor.hfov_deg);
      cfg.episode.sensor.camera_height_m =
          js.value("camera_height_m", cfg.episode.sensor.camera_height_m);
      cfg.episode.sensor.max_depth_m = js.value("max_depth_m", cfg.episode.sensor.max_depth_m);
    }
    if (j.contains("segmentation_noise")) {
      const auto& jn = j.at("segmentation_noise");
      cfg.episode.seg_noise.miss_rate = jn.value("miss_rate", 0.0);
      cfg.episode.seg_noise.confusion_rate = jn.value("confusion_rate", 0.0);
      cfg.episode.seg_noise.boundary_erosion_px = jn.value("boundary_erosion_px", 0);
      cfg.episode.seg_noise.validate();
    }
    if (j.contains("select")) {
      cfg.episode.select.beta_per_m =
          j.at("select").value("beta_per_m", cfg.episode.select.beta_per_m);
    }
    cfg.episode.success_geodesic = j.value("success_geodesic", false);
    cfg.threads = j.value("threads", 0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("benchmark config: ") + e.what());
  }
  require(!cfg.methods.empty(), "benchmark config: 'methods' must be non-empty");
  return cfg;
}

inline BenchConfig load_bench_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config ") + path + ": " + e.what(), long(e.byte));
  }
  return bench_config_from_json(j);
}

}  // namespace semnav::harness
