#pragma once

#include <cmath>
#include <vector>

#include "semnav/core/error.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::harness {

/** Distance To Success: residual distance beyond the success threshold,
 *  measured Euclidean to the nearest goal-instance boundary. */
inline double metric_dts(Vec2 x_T, const std::vector<world::ObjectInstance>& goal_instances,
                         double d_s) {
  require(!goal_instances.empty(), "metric_dts: no goal instances");
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& o : goal_instances)
    nearest = std::min(nearest, o.footprint.distance_to(x_T));
  return std::max(nearest - d_s, 0.0);
}

/** One SPL term: S * l / max(p, l). */
inline double spl_term(bool success, double shortest_m, double path_m) {
  require(shortest_m > 0.0, "spl: shortest path length must be positive");
  if (!success) return 0.0;
  return shortest_m / std::max(path_m, shortest_m);
}

/** Success weighted by Path Length over a result set. */
inline double metric_spl(const std::vector<double>& terms) {
  if (terms.empty()) return 0.0;
  double sum = 0;
  for (double t : terms) sum += t;
  return sum / double(terms.size());
}

struct ZTestResult {
  double z = 0.0;
  double p_one_sided = 1.0;  // P(first rate <= second) under H0
  double p_two_sided = 1.0;
};

/** Two-proportion z-test with the pooled variance estimate. */
inline ZTestResult two_proportion_z_test(int successes1, int n1, int successes2, int n2) {
  require(n1 > 0 && n2 > 0, "z-test: empty samples");
  double p1 = double(successes1) / n1;
  double p2 = double(successes2) / n2;
  double pooled = double(successes1 + successes2) / double(n1 + n2);
  double var = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2);
  ZTestResult r;
  if (var <= 0.0) {
    r.z = 0.0;
    r.p_one_sided = p1 > p2 ? 0.0 : 1.0;
    r.p_two_sided = p1 == p2 ? 1.0 : 0.0;
    return r;
  }
  r.z = (p1 - p2) / std::sqrt(var);
  r.p_one_sided = 0.5 * std::erfc(r.z / std::sqrt(2.0));
  r.p_two_sided = std::erfc(std::abs(r.z) / std::sqrt(2.0));
  return r;
}

}  // namespace semnav::harness
