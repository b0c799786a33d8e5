// Copyright 2026 The csgtopo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csgtopo/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "csgtopo/engine.hpp"
#include "csgtopo/error.hpp"
#include "csgtopo/scene.hpp"

namespace csgtopo {

const char* const kBenchQuery =
    "Vertical_BoundingBox(?x) ∧ Vertical_BoundingBox(?y) ∧ swrl_topo:overlaps(?x, ?y) "
    "→ sqwrl:selectDistinct(?x, ?y)";

void BenchConfig::validate() const {
  if (sizes.empty()) throw ArgumentError("bench: no sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw ArgumentError("bench: sizes must be strictly increasing");
  }
  if (repetitions < 3) throw ArgumentError("bench: repetitions must be at least 3");
  if (jobs < 1) throw ArgumentError("bench: jobs must be at least 1");
}

std::string BenchResult::to_csv() const {
  std::string out = "n,pairs,median_ms,relate_calls\n";
  char buffer[128];
  for (const auto& r : rows) {
    std::snprintf(buffer, sizeof(buffer), "%zu,%zu,%.3f,%zu\n", r.n, r.pairs, r.median_ms,
                  r.relate_calls);
    out += buffer;
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

BenchResult run_bench(const BenchConfig& config,
                      const std::function<void(const BenchRow&)>& progress) {
  config.validate();
  const Query query_ast = parse_query(kBenchQuery);
  BenchResult result;
  result.jobs = config.jobs;
  for (const std::size_t n : config.sizes) {
    BoxSceneConfig scene_config;
    scene_config.count = n;
    scene_config.seed = config.seed;
    scene_config.min_edge = config.min_edge;
    scene_config.max_edge = config.max_edge;
    scene_config.universe_size = config.universe_size;
    const Scene scene = generate_box_scene(scene_config);

    EvaluationOptions options;
    options.relate = RelateOptions::defaults_for(scene.universe);
    options.jobs = config.jobs;

    BenchRow row;
    row.n = n;
    row.pairs = n * (n - 1) / 2;
    std::vector<double> times;
    std::vector<double> cached;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
      const auto start = std::chrono::steady_clock::now();
      const QueryResult q = query(query_ast, kb, options);
      times.push_back(elapsed_ms(start));
      // Every repetition starts cold, so each must relate every pair once.
      row.relate_calls = std::max(row.relate_calls, q.relate_calls);
      row.overlapping_pairs = q.rows.size();
      if (rep + 1 == config.repetitions) {
        for (int again = 0; again < config.repetitions; ++again) {
          const auto warm = std::chrono::steady_clock::now();
          const QueryResult c = query(query_ast, kb, options);
          cached.push_back(elapsed_ms(warm));
          if (c.relate_calls != 0 || c.rows != q.rows) {
            throw Error("bench: cached query disagrees with the first run");
          }
        }
      }
    }
    row.median_ms = median(times);
    row.cached_median_ms = median(cached);
    result.rows.push_back(row);
    if (progress) progress(row);
  }
  return result;
}

ScalingReport check_scaling(const BenchResult& result) {
  if (result.rows.size() < 3) throw ArgumentError("scaling check needs at least three sizes");
  ScalingReport report;
  bool ok = true;
  char buffer[256];
  for (const auto& r : result.rows) {
    const std::size_t expected = r.n * (r.n - 1) / 2;
    if (r.pairs != expected || r.relate_calls != expected) {
      ok = false;
      std::snprintf(buffer, sizeof(buffer), "n=%zu: pairs=%zu relate_calls=%zu, expected %zu", r.n,
                    r.pairs, r.relate_calls, expected);
      report.lines.emplace_back(buffer);
    }
  }
  const BenchRow& largest = result.rows.back();
  const auto half = std::find_if(result.rows.begin(), result.rows.end(),
                                 [&](const BenchRow& r) { return 2 * r.n == largest.n; });
  if (half == result.rows.end()) {
    throw ArgumentError("scaling check needs a size equal to half the largest");
  }
  report.ratio = half->median_ms > 0 ? largest.median_ms / half->median_ms : 0.0;
  report.speedup = largest.cached_median_ms > 0 ? largest.median_ms / largest.cached_median_ms : 0.0;
  const bool ratio_ok = report.ratio >= 2.5 && report.ratio <= 8.0;
  const bool speedup_ok = report.speedup >= 5.0;
  std::snprintf(buffer, sizeof(buffer), "ratio median_ms(%zu)/median_ms(%zu) = %.2f (band [2.5, 8])%s",
                largest.n, half->n, report.ratio, ratio_ok ? "" : " out of band");
  report.lines.emplace_back(buffer);
  std::snprintf(buffer, sizeof(buffer), "cached re-run at n=%zu: %.3f ms vs %.3f ms, speedup %.1fx (need >= 5x)",
                largest.n, largest.cached_median_ms, largest.median_ms, report.speedup);
  report.lines.emplace_back(buffer);
  report.passed = ok && ratio_ok && speedup_ok;
  return report;
}

}  // namespace csgtopo
