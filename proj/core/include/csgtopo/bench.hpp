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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace csgtopo {

struct BenchConfig {
  std::vector<std::size_t> sizes{100, 250, 500, 1000};
  std::uint64_t seed = 42;
  double min_edge = 0.5;
  double max_edge = 2.0;
  double universe_size = 100.0;
  int repetitions = 3;
  int jobs = 1;

  /// Throws ArgumentError: sizes empty or not strictly increasing,
  /// repetitions < 3, jobs < 1.
  void validate() const;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t pairs = 0;
  double median_ms = 0.0;
  std::size_t relate_calls = 0;
  /// Median time of the same query against the already enriched knowledge base.
  double cached_median_ms = 0.0;
  /// Rows returned by the query.
  std::size_t overlapping_pairs = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  int jobs = 1;

  /// "n,pairs,median_ms,relate_calls" header plus one line per size.
  std::string to_csv() const;
};

/// The all-pairs overlap query used by the benchmark.
extern const char* const kBenchQuery;

/// For each size: generates a seeded box scene, times the overlap query from
/// a fresh knowledge base (median over repetitions), then times it again
/// against the enriched knowledge base.
BenchResult run_bench(const BenchConfig& config,
                      const std::function<void(const BenchRow&)>& progress = {});

struct ScalingReport {
  bool passed = false;
  double ratio = 0.0;    // median_ms(n) / median_ms(n / 2) for the largest n
  double speedup = 0.0;  // median_ms / cached_median_ms at the largest n
  std::vector<std::string> lines;
};

/// Pairs and relate_calls equal n(n-1)/2 on every row; time ratio between
/// the largest size and half of it within [2.5, 8]; cached re-run at the
/// largest size at least 5x faster. Throws ArgumentError with fewer than
/// three rows or without a size equal to half the largest.
ScalingReport check_scaling(const BenchResult& result);

}  // namespace csgtopo
