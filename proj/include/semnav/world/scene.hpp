#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semnav/core/error.hpp"
#include "semnav/core/geometry.hpp"
#include "semnav/world/categories.hpp"

namespace semnav::world {

/** Grid pitch shared by every raster in the system (5 cm). */
inline constexpr double kCellM = 0.05;
/** Objects at or above this height block traversal. */
inline constexpr double kObstacleHeightM = 0.2;
/** Physical radius of the agent disk. */
inline constexpr double kAgentRadiusM = 0.18;
/**
 * Inflation radius used for planning: the physical radius plus a maneuvering
 * margin. The discrete step/turn action set cannot thread passages that are
 * only barely wider than the agent, so the planner refuses them while
 * collision checks and metrics keep the physical radius.
 */
inline constexpr double kPlannerInflationM = 0.26;

/** Zero-thickness axis-aligned wall piece with a height. */
struct Wall {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double height = 2.5;

  bool operator==(const Wall&) const = default;
  bool vertical() const { return x0 == x1; }
};

struct ObjectInstance {
  int category = 0;
  Rect footprint;
  double height = 1.0;

  bool operator==(const ObjectInstance&) const = default;
};

/**
 * Ground-truth 2.5D indoor world: extent in meters with the origin at the
 * south-west corner, walls, and labeled box furniture.
 */
struct Scene {
  double width_m = 0;
  double height_m = 0;
  std::vector<Wall> walls;
  std::vector<ObjectInstance> objects;
  uint64_t seed = 0;

  bool operator==(const Scene&) const = default;

  bool contains(Vec2 p) const {
    return p.x >= 0 && p.x <= width_m && p.y >= 0 && p.y <= height_m;
  }
};

/** One navigation task: start pose plus a goal-eligible category. */
struct EpisodeSpec {
  uint64_t scene_id = 0;
  semnav::Pose start;
  int goal_category = 0;
  uint64_t seed = 0;

  bool operator==(const EpisodeSpec&) const = default;
};

/** Throws on any violated structural invariant. */
inline void validate_scene(const Scene& s) {
  require(s.width_m > 0 && s.height_m > 0, "scene extent must be positive");
  for (const auto& w : s.walls) {
    require(w.x0 == w.x1 || w.y0 == w.y1, "walls must be axis-aligned");
    require(w.height > 0, "wall height must be positive");
  }
  for (const auto& o : s.objects) {
    require(is_valid_category(o.category), "object category out of range");
    require(o.height > 0 && o.height <= 2.5, "object height must be in (0, 2.5]");
    require(o.footprint.area() > 0, "object footprint must have positive area");
    require(o.footprint.x0 >= 0 && o.footprint.y0 >= 0 && o.footprint.x1 <= s.width_m &&
                o.footprint.y1 <= s.height_m,
            "object footprint outside scene extent");
    for (const auto& w : s.walls) {
      if (w.vertical()) {
        bool crosses = w.x0 > o.footprint.x0 && w.x0 < o.footprint.x1 &&
                       w.y0 < o.footprint.y1 && w.y1 > o.footprint.y0;
        require(!crosses, "object footprint intersects a wall");
      } else {
        bool crosses = w.y0 > o.footprint.y0 && w.y0 < o.footprint.y1 &&
                       w.x0 < o.footprint.x1 && w.x1 > o.footprint.x0;
        require(!crosses, "object footprint intersects a wall");
      }
    }
  }
}

inline nlohmann::json scene_to_json(const Scene& s) {
  nlohmann::json j;
  j["format"] = 1;
  j["extent"] = {s.width_m, s.height_m};
  j["seed"] = s.seed;
  j["categories"] = nlohmann::json::array();
  for (auto* n : kCategoryNames) j["categories"].push_back(n);
  j["walls"] = nlohmann::json::array();
  for (const auto& w : s.walls)
    j["walls"].push_back({{"x0", w.x0}, {"y0", w.y0}, {"x1", w.x1}, {"y1", w.y1},
                          {"height", w.height}});
  j["objects"] = nlohmann::json::array();
  for (const auto& o : s.objects)
    j["objects"].push_back({{"category", category_name(o.category)},
                            {"rect", {o.footprint.x0, o.footprint.y0, o.footprint.x1,
                                      o.footprint.y1}},
                            {"height", o.height}});
  return j;
}

inline Scene scene_from_json(const nlohmann::json& j) {
  Scene s;
  try {
    require(j.at("format").get<int>() == 1, "unsupported scene format version");
    s.width_m = j.at("extent").at(0).get<double>();
    s.height_m = j.at("extent").at(1).get<double>();
    s.seed = j.at("seed").get<uint64_t>();
    for (const auto& jw : j.at("walls")) {
      Wall w;
      w.x0 = jw.at("x0").get<double>();
      w.y0 = jw.at("y0").get<double>();
      w.x1 = jw.at("x1").get<double>();
      w.y1 = jw.at("y1").get<double>();
      w.height = jw.at("height").get<double>();
      s.walls.push_back(w);
    }
    for (const auto& jo : j.at("objects")) {
      ObjectInstance o;
      o.category = category_from_name(jo.at("category").get<std::string>());
      const auto& r = jo.at("rect");
      o.footprint = {r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>(),
                     r.at(3).get<double>()};
      o.height = jo.at("height").get<double>();
      s.objects.push_back(o);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scene JSON: ") + e.what());
  }
  validate_scene(s);
  return s;
}

inline void save_scene(const Scene& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  f << scene_to_json(s).dump(2) << "\n";
  if (!f) throw Error("write failed: " + path);
}

inline Scene load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scene file ") + path + ": " + e.what(), long(e.byte));
  }
  return scene_from_json(j);
}

}  // namespace semnav::world
