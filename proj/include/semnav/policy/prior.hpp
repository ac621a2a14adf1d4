#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semnav/core/error.hpp"
#include "semnav/core/rng.hpp"
#include "semnav/world/geodesic.hpp"
#include "semnav/world/scene.hpp"

namespace semnav::policy {

/**
 * Co-occurrence affinities between goal and observed categories. W[g][c] is
 * the shuffle-corrected proximity statistic of category c to goal g over a
 * training corpus; b[g] the log frequency of g. Immutable after fitting.
 */
struct PriorTable {
  int num_categories = world::kNumCategories;
  std::vector<double> w;   // row-major C x C
  std::vector<double> b;   // C
  std::vector<double> se;  // standard error of each W entry
  double tau_m = 2.0;
  std::vector<int> flagged;  // categories absent from the corpus

  double W(int g, int c) const { return w[size_t(g) * num_categories + c]; }
  double SE(int g, int c) const { return se[size_t(g) * num_categories + c]; }
};

struct FitParams {
  double tau_m = 2.0;
  int shuffles = 64;
  uint64_t shuffle_seed = 0x5EEDFULL;
};

/**
 * Count-based fit of the semantic prior. Per scene, the statistic for (g, c)
 * is exp(-d_min/tau) with d_min the smallest geodesic distance between an
 * instance of g and a distinct instance of c; the null subtracts the same
 * statistic under within-scene shuffles of the instance labels, so spatially
 * independent layouts fit to zero. Deterministic for a fixed corpus and seed.
 */
inline PriorTable fit_prior(const std::vector<world::Scene>& scenes,
                            const FitParams& params = {}) {
  require(!scenes.empty(), "fit_prior: empty corpus");
  const int C = world::kNumCategories;
  PriorTable table;
  table.tau_m = params.tau_m;
  table.w.assign(size_t(C) * C, 0.0);
  table.b.assign(size_t(C), 0.0);
  table.se.assign(size_t(C) * C, 0.0);

  // Per-(g,c) per-scene deltas (real statistic minus shuffle-null mean).
  std::vector<std::vector<double>> deltas(size_t(C) * C);
  std::vector<size_t> counts(size_t(C), 0);
  size_t total_instances = 0;

  for (size_t si = 0; si < scenes.size(); ++si) {
    const auto& scene = scenes[si];
    const int n = int(scene.objects.size());
    if (n < 2) continue;
    for (const auto& o : scene.objects) {
      ++counts[size_t(o.category)];
      ++total_instances;
    }

    // Pairwise geodesic distances between instances: one multi-source field
    // per instance, evaluated at every other instance's nearest cell. Every
    // footprint gets approach clearance up front so fields can reach into
    // each other's inflation shells.
    world::GeodesicOracle oracle(scene);
    const auto& gt = oracle.ground_truth();
    auto cells = std::vector<std::vector<Cell>>(size_t(n));
    std::vector<Cell> all_cells;
    for (int i = 0; i < n; ++i) {
      const Rect& f = scene.objects[size_t(i)].footprint;
      Cell c0 = gt.cell_of({f.x0, f.y0}), c1 = gt.cell_of({f.x1, f.y1});
      for (int y = c0.y; y <= c1.y; ++y)
        for (int x = c0.x; x <= c1.x; ++x)
          if (gt.in_bounds(x, y)) {
            cells[size_t(i)].push_back({x, y});
            all_cells.push_back({x, y});
          }
    }
    auto augmented = world::clear_around_seeds(oracle.traversable(), all_cells,
                                               world::kGoalApproachClearanceCells);
    std::vector<double> dist(size_t(n) * n, world::kInfDist);
    for (int i = 0; i < n; ++i) {
      auto field = world::dijkstra_field(augmented, cells[size_t(i)], world::kCellM);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        double best = world::kInfDist;
        for (auto c : cells[size_t(j)]) best = std::min(best, field.at(c));
        dist[size_t(i) * n + j] = best;
      }
    }

    auto stat = [&](const std::vector<int>& labels, int g, int c) {
      double best = world::kInfDist;
      for (int i = 0; i < n; ++i) {
        if (labels[size_t(i)] != g) continue;
        for (int j = 0; j < n; ++j) {
          if (i == j || labels[size_t(j)] != c) continue;
          best = std::min(best, dist[size_t(i) * n + j]);
        }
      }
      return std::isfinite(best) ? std::exp(-best / params.tau_m) : -1.0;
    };

    auto labels = std::vector<int>(size_t(n));
    for (int i = 0; i < n; ++i) labels[size_t(i)] = scene.objects[size_t(i)].category;

    std::vector<double> real(size_t(C) * C, -1.0);
    for (int g = 0; g < C; ++g)
      for (int c = 0; c < C; ++c) real[size_t(g) * C + c] = stat(labels, g, c);

    // Shuffle stream keyed by scene content only: duplicated scenes must
    // contribute identical deltas so the corpus mean is unchanged.
    std::vector<double> null_sum(size_t(C) * C, 0.0);
    std::vector<int> null_cnt(size_t(C) * C, 0);
    Rng rng = Rng::derive(params.shuffle_seed, {scene.seed});
    std::vector<int> shuffled = labels;
    for (int r = 0; r < params.shuffles; ++r) {
      rng.shuffle(shuffled);
      for (int g = 0; g < C; ++g)
        for (int c = 0; c < C; ++c) {
          double s = stat(shuffled, g, c);
          if (s >= 0.0) {
            null_sum[size_t(g) * C + c] += s;
            ++null_cnt[size_t(g) * C + c];
          }
        }
    }
    for (int g = 0; g < C; ++g)
      for (int c = 0; c < C; ++c) {
        size_t k = size_t(g) * C + c;
        if (real[k] < 0.0 || null_cnt[k] == 0) continue;
        deltas[k].push_back(real[k] - null_sum[k] / null_cnt[k]);
      }
  }

  for (int g = 0; g < C; ++g) {
    if (counts[size_t(g)] == 0) {
      table.flagged.push_back(g);
      continue;  // row stays zero
    }
    table.b[size_t(g)] =
        std::log(double(counts[size_t(g)]) / double(std::max<size_t>(total_instances, 1)));
    for (int c = 0; c < C; ++c) {
      size_t k = size_t(g) * C + c;
      const auto& d = deltas[k];
      if (d.empty()) continue;
      double mean = 0;
      for (double v : d) mean += v;
      mean /= double(d.size());
      double var = 0;
      for (double v : d) var += (v - mean) * (v - mean);
      var = d.size() > 1 ? var / double(d.size() - 1) : 0.0;
      table.w[k] = mean;
      table.se[k] = std::sqrt(var / double(d.size()));
    }
  }
  return table;
}

inline void save_prior(const PriorTable& t, const std::string& path) {
  nlohmann::json j;
  j["format"] = 1;
  j["tau_m"] = t.tau_m;
  j["categories"] = nlohmann::json::array();
  for (auto* n : world::kCategoryNames) j["categories"].push_back(n);
  j["w"] = t.w;
  j["b"] = t.b;
  j["se"] = t.se;
  j["flagged"] = t.flagged;
  std::ofstream f(path);
  if (!f) throw Error("cannot open for writing: " + path);
  f << j.dump(2) << "\n";
}

inline PriorTable load_prior(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
    PriorTable t;
    require(j.at("format").get<int>() == 1, "unsupported prior format");
    t.tau_m = j.at("tau_m").get<double>();
    t.w = j.at("w").get<std::vector<double>>();
    t.b = j.at("b").get<std::vector<double>>();
    t.se = j.at("se").get<std::vector<double>>();
    t.flagged = j.at("flagged").get<std::vector<int>>();
    const size_t C = world::kNumCategories;
    require(t.w.size() == C * C && t.b.size() == C, "prior table has wrong shape");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("prior file ") + path + ": " + e.what());
  }
}

}  // namespace semnav::policy
