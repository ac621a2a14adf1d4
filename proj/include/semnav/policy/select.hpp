#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "semnav/core/rng.hpp"
#include "semnav/policy/frontier.hpp"
#include "semnav/policy/prior.hpp"

namespace semnav::policy {

enum class PolicyKind {
  kRandom,
  kFrontier,        // classical nearest-frontier exploration
  kCoverage,        // goal-agnostic, biggest-frontier-first
  kSemanticPrior,   // prior-scored frontier selection
  kObstacleOnlyPrior,  // prior scorer with the category terms silenced
};

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::kRandom: return "random";
    case PolicyKind::kFrontier: return "frontier";
    case PolicyKind::kCoverage: return "coverage";
    case PolicyKind::kSemanticPrior: return "semantic_prior";
    default: return "obstacle_prior";
  }
}

inline PolicyKind policy_kind_from_name(const std::string& name) {
  for (PolicyKind k : {PolicyKind::kRandom, PolicyKind::kFrontier, PolicyKind::kCoverage,
                       PolicyKind::kSemanticPrior, PolicyKind::kObstacleOnlyPrior})
    if (name == to_string(k)) return k;
  throw Error("unknown policy kind: " + name);
}

/** Map cells the local planner should steer toward. */
struct LongTermGoal {
  std::vector<Cell> cells;
  bool exhausted = false;  // fallback fired: map fully explored, no goal seen
};

struct SelectParams {
  double beta_per_m = 0.1;  // travel-cost weight in the prior score
};

/**
 * Prior-driven candidate scoring:
 *   score(f) = b[G] + sum_c W[G][c] * exp(-d(f, nearest cell of c) / tau)
 *              - beta * d(pose, f)
 * with Euclidean distances in meters on the map. Returns the argmax candidate
 * as a singleton goal; ties break to the smaller cell index. With
 * use_categories = false every W term is silenced, which is what the
 * obstacle-only ablation runs.
 */
inline LongTermGoal score_candidates(const std::vector<FrontierCandidate>& cands,
                                     const mapping::SemanticMap& m, const Pose& pose,
                                     int goal_category, const PriorTable& prior,
                                     const SelectParams& params = {},
                                     bool use_categories = true) {
  require(!cands.empty(), "score_candidates: empty candidate list");
  const auto& ref = m.frame_ref();
  const int C = m.config().num_categories;

  // Nonzero cells per category, collected once.
  auto cat_cells = std::vector<std::vector<Cell>>(size_t(C));
  if (use_categories) {
    for (int c = 0; c < C; ++c) {
      const CellBox& box = m.channel_box(mapping::kChanCategory0 + c);
      if (box.empty()) continue;
      const auto& chan = m.category(c);
      for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x)
          if (chan.at(x, y) > 0.0f) cat_cells[size_t(c)].push_back({x, y});
    }
  }

  Cell agent = ref.world_to_cell(pose.position());
  double best_score = -1e300;
  size_t best_i = 0;
  for (size_t i = 0; i < cands.size(); ++i) {
    Cell f = cands[i].cell;
    double score = prior.b[size_t(goal_category)];
    if (use_categories) {
      for (int c = 0; c < C; ++c) {
        if (cat_cells[size_t(c)].empty()) continue;
        double w = prior.W(goal_category, c);
        if (w == 0.0) continue;
        double best_d2 = 1e300;
        for (auto cc : cat_cells[size_t(c)]) {
          double dx = double(cc.x - f.x), dy = double(cc.y - f.y);
          best_d2 = std::min(best_d2, dx * dx + dy * dy);
        }
        score += w * std::exp(-std::sqrt(best_d2) * ref.cell / prior.tau_m);
      }
    }
    double dxa = double(f.x - agent.x), dya = double(f.y - agent.y);
    score -= params.beta_per_m * std::sqrt(dxa * dxa + dya * dya) * ref.cell;
    bool better = score > best_score + 1e-15;
    bool tie = std::abs(score - best_score) <= 1e-15;
    auto index_of = [&](Cell c) { return size_t(c.y) * ref.size + size_t(c.x); };
    if (better || (tie && index_of(f) < index_of(cands[best_i].cell))) {
      best_score = score;
      best_i = i;
    }
  }
  return {{cands[best_i].cell}, false};
}

/** Goal-agnostic coverage: the biggest frontier, ties to the nearest one. */
inline LongTermGoal coverage_goal(const std::vector<FrontierCandidate>& cands,
                                  const mapping::SemanticMap& m, const Pose& pose) {
  require(!cands.empty(), "coverage_goal: empty candidate list");
  Cell agent = m.frame_ref().world_to_cell(pose.position());
  size_t best = 0;
  auto dist2 = [&](Cell c) {
    double dx = c.x - agent.x, dy = c.y - agent.y;
    return dx * dx + dy * dy;
  };
  for (size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].size > cands[best].size ||
        (cands[i].size == cands[best].size && dist2(cands[i].cell) < dist2(cands[best].cell)))
      best = i;
  }
  return {{cands[best].cell}, false};
}

namespace select_detail {

/** Uniform cell among those not known to be obstacles. */
inline LongTermGoal random_goal(const mapping::SemanticMap& m, Rng& rng, bool exhausted) {
  const auto& obst = m.obstacle();
  const int M = m.config().size_cells;
  size_t free_count = obst.size() - m.channel_count(mapping::kChanObstacle);
  if (free_count == 0) {
    Cell center{M / 2, M / 2};
    return {{center}, exhausted};
  }
  size_t pick = size_t(rng.uniform_int(uint64_t(free_count)));
  for (size_t i = 0; i < obst.size(); ++i) {
    if (obst[i] > 0.0f) continue;
    if (pick == 0)
      return {{Cell{int(i % size_t(M)), int(i / size_t(M))}}, exhausted};
    --pick;
  }
  return {{Cell{M / 2, M / 2}}, exhausted};
}

/** Classical frontier-based exploration: the nearest frontier cell. */
inline LongTermGoal nearest_frontier_cell(const FrontierSet& fs,
                                          const mapping::SemanticMap& m, const Pose& pose) {
  Cell agent = m.frame_ref().world_to_cell(pose.position());
  Cell best{};
  double best_d = 1e300;
  for (const auto& comp : fs.components)
    for (auto c : comp) {
      double dx = c.x - agent.x, dy = c.y - agent.y;
      double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
  return {{best}, false};
}

}  // namespace select_detail

/**
 * Long-term goal selection, run once every goal period. The goal-visible
 * rule comes first for every policy kind: when the goal category's channel
 * has any nonzero cell, those cells are the goal verbatim. Otherwise each
 * kind picks its own exploration target; with the map exhausted (no
 * frontiers left) the fallback is a random free cell, flagged.
 */
inline LongTermGoal select_long_term_goal(const mapping::SemanticMap& m, const Pose& pose,
                                          int goal_category, PolicyKind kind,
                                          const PriorTable& prior, Rng& rng,
                                          const SelectParams& params = {}) {
  const CellBox& gbox = m.channel_box(mapping::kChanCategory0 + goal_category);
  if (!gbox.empty()) {
    LongTermGoal goal;
    const auto& chan = m.category(goal_category);
    for (int y = gbox.y0; y <= gbox.y1; ++y)
      for (int x = gbox.x0; x <= gbox.x1; ++x)
        if (chan.at(x, y) > 0.0f) goal.cells.push_back({x, y});
    return goal;
  }

  if (kind == PolicyKind::kRandom) return select_detail::random_goal(m, rng, false);

  FrontierSet fs = find_frontiers(m);
  if (fs.candidates.empty()) return select_detail::random_goal(m, rng, true);

  switch (kind) {
    case PolicyKind::kFrontier:
      return select_detail::nearest_frontier_cell(fs, m, pose);
    case PolicyKind::kCoverage:
      return coverage_goal(fs.candidates, m, pose);
    case PolicyKind::kSemanticPrior:
      return score_candidates(fs.candidates, m, pose, goal_category, prior, params, true);
    case PolicyKind::kObstacleOnlyPrior:
      return score_candidates(fs.candidates, m, pose, goal_category, prior, params, false);
    default:
      return select_detail::random_goal(m, rng, false);
  }
}

}  // namespace semnav::policy
