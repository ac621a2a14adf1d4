#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "semnav/harness/runner.hpp"
#include "semnav/policy/prior.hpp"
#include "semnav/world/scene_gen.hpp"

namespace semnav::harness {

struct BenchMethod {
  std::string label;
  policy::PolicyKind kind = policy::PolicyKind::kSemanticPrior;
  bool corrupt_segmentation = false;
};

struct BenchConfig {
  uint64_t seed = 1;

  int scene_count = 5;
  uint64_t scene_seed0 = 1000;
  world::SceneParams scene_params;

  int episodes_per_scene = 200;
  std::vector<BenchMethod> methods;

  // Prior: loaded from a file when set, otherwise fitted on a fresh corpus.
  std::string prior_file;
  int train_scene_count = 40;
  uint64_t train_scene_seed0 = 77000;
  policy::FitParams fit;

  EpisodeConfig episode;
  int threads = 0;  // 0 = hardware concurrency
};

struct EpisodeRow {
  std::string method;
  uint64_t scene_seed = 0;
  int episode_index = 0;
  int goal_category = 0;
  int success = 0;
  double spl_term = 0.0;
  double dts_m = 0.0;
  double path_m = 0.0;
  double shortest_m = 0.0;
  int steps = 0;
  int stop_issued = 0;
  int collisions = 0;
  int resamples_on_schedule = 1;  // instrumentation: {0, u, 2u, ...} exactly
};

struct MethodAggregate {
  std::string method;
  int episodes = 0;
  int successes = 0;
  double success_rate = 0.0;
  double spl = 0.0;
  double dts_mean = 0.0;
};

struct PairwiseTest {
  std::string method_a, method_b;
  double rate_a = 0.0, rate_b = 0.0;
  ZTestResult z;
};

struct BenchmarkReport {
  std::vector<EpisodeRow> rows;
  std::vector<MethodAggregate> aggregates;
  std::vector<PairwiseTest> adjacent_tests;
  // Full per-episode results are kept only when capture_results is set in
  // run_benchmark (they are large).
  std::vector<EpisodeResult> results;
};

inline uint64_t splitmix_hash(uint64_t a, uint64_t b) {
  uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

namespace bench_detail {

inline int resamples_on_schedule(const EpisodeResult& r, int period) {
  size_t expected = size_t(r.steps + period - 1) / size_t(period);
  if (r.goal_selections.size() != expected) return 0;
  for (size_t i = 0; i < r.goal_selections.size(); ++i)
    if (r.goal_selections[i].step != int(i) * period) return 0;
  return 1;
}

}  // namespace bench_detail

/**
 * Runs every (method x episode) cell over a paired design: episode specs are
 * sampled once per scene and reused across methods. Episodes execute on a
 * worker pool; each lands in its preassigned slot, so the report is
 * bit-identical for any thread count.
 */
inline BenchmarkReport run_benchmark(const BenchConfig& cfg, bool capture_results = false,
                                     const policy::PriorTable* prior_override = nullptr) {
  require(!cfg.methods.empty(), "benchmark: no methods configured");
  require(cfg.scene_count > 0 && cfg.episodes_per_scene > 0, "benchmark: empty grid");

  int threads = cfg.threads > 0 ? cfg.threads
                                : int(std::max(1u, std::thread::hardware_concurrency()));

  // Scenes and their oracles, then the paired episode specs.
  std::vector<world::Scene> scenes(size_t(cfg.scene_count));
  std::vector<std::unique_ptr<world::GeodesicOracle>> oracles(size_t(cfg.scene_count));
  {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next.fetch_add(1); i < cfg.scene_count; i = next.fetch_add(1)) {
        scenes[size_t(i)] =
            world::generate_scene(cfg.scene_seed0 + uint64_t(i), cfg.scene_params);
        oracles[size_t(i)] = std::make_unique<world::GeodesicOracle>(scenes[size_t(i)]);
        oracles[size_t(i)]->precompute_category_fields();
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<world::EpisodeSpec> specs(size_t(cfg.scene_count) *
                                        size_t(cfg.episodes_per_scene));
  for (int s = 0; s < cfg.scene_count; ++s)
    for (int e = 0; e < cfg.episodes_per_scene; ++e) {
      uint64_t episode_seed = splitmix_hash(cfg.seed, uint64_t(s) << 20 | uint64_t(e));
      specs[size_t(s) * cfg.episodes_per_scene + e] =
          world::sample_episode(scenes[size_t(s)], *oracles[size_t(s)], episode_seed);
    }

  policy::PriorTable prior;
  if (prior_override) {
    prior = *prior_override;
  } else if (!cfg.prior_file.empty()) {
    prior = policy::load_prior(cfg.prior_file);
  } else {
    std::vector<world::Scene> train(size_t(cfg.train_scene_count));
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int i = next.fetch_add(1); i < cfg.train_scene_count; i = next.fetch_add(1))
        train[size_t(i)] =
            world::generate_scene(cfg.train_scene_seed0 + uint64_t(i), cfg.scene_params);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    prior = policy::fit_prior(train, cfg.fit);
  }

  // The job grid.
  const size_t per_method = specs.size();
  const size_t total = per_method * cfg.methods.size();
  BenchmarkReport report;
  report.rows.resize(total);
  if (capture_results) report.results.resize(total);

  std::atomic<size_t> next_job{0};
  auto worker = [&] {
    EpisodeRunner runner;
    for (size_t job = next_job.fetch_add(1); job < total; job = next_job.fetch_add(1)) {
      size_t m = job / per_method;
      size_t idx = job % per_method;
      int s = int(idx) / cfg.episodes_per_scene;
      int e = int(idx) % cfg.episodes_per_scene;
      const BenchMethod& method = cfg.methods[m];

      EpisodeConfig ecfg = cfg.episode;
      ecfg.corrupt_segmentation = method.corrupt_segmentation;
      uint64_t run_seed = splitmix_hash(cfg.seed, 0x9000000ULL + (m << 24) + idx);
      EpisodeResult r = runner.run(scenes[size_t(s)], *oracles[size_t(s)], specs[idx],
                                   method.kind, prior, ecfg, run_seed);

      EpisodeRow row;
      row.method = method.label;
      row.scene_seed = scenes[size_t(s)].seed;
      row.episode_index = e;
      row.goal_category = specs[idx].goal_category;
      row.success = r.success ? 1 : 0;
      row.spl_term = r.goal_absent || !std::isfinite(r.shortest_length_m) ||
                             r.shortest_length_m <= 0.0
                         ? 0.0
                         : spl_term(r.success, r.shortest_length_m, r.path_length_m);
      row.dts_m = r.dts_m;
      row.path_m = r.path_length_m;
      row.shortest_m = r.shortest_length_m;
      row.steps = r.steps;
      row.stop_issued = r.stop_issued ? 1 : 0;
      row.collisions = r.collisions;
      row.resamples_on_schedule =
          bench_detail::resamples_on_schedule(r, cfg.episode.motion.goal_period);
      report.rows[job] = std::move(row);
      if (capture_results)
        report.results[job] = std::move(r);
    }
  };
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregates in configured method order; rows are already method-major.
  for (size_t m = 0; m < cfg.methods.size(); ++m) {
    MethodAggregate agg;
    agg.method = cfg.methods[m].label;
    double spl_sum = 0.0, dts_sum = 0.0;
    int dts_n = 0;
    for (size_t i = 0; i < per_method; ++i) {
      const EpisodeRow& row = report.rows[m * per_method + i];
      ++agg.episodes;
      agg.successes += row.success;
      spl_sum += row.spl_term;
      if (std::isfinite(row.dts_m)) {
        dts_sum += row.dts_m;
        ++dts_n;
      }
    }
    agg.success_rate = double(agg.successes) / double(agg.episodes);
    agg.spl = spl_sum / double(agg.episodes);
    agg.dts_mean = dts_n ? dts_sum / dts_n : 0.0;
    report.aggregates.push_back(agg);
  }
  for (size_t m = 0; m + 1 < report.aggregates.size(); ++m) {
    const auto& a = report.aggregates[m];
    const auto& b = report.aggregates[m + 1];
    PairwiseTest t;
    t.method_a = a.method;
    t.method_b = b.method;
    t.rate_a = a.success_rate;
    t.rate_b = b.success_rate;
    t.z = two_proportion_z_test(a.successes, a.episodes, b.successes, b.episodes);
    report.adjacent_tests.push_back(t);
  }
  return report;
}

}  // namespace semnav::harness
