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

#include <benchmark/benchmark.h>

#include <string>

#include "csgtopo/engine.hpp"
#include "csgtopo/geometry.hpp"
#include "csgtopo/knowledge_base.hpp"
#include "csgtopo/rules.hpp"
#include "csgtopo/scene.hpp"
#include "csgtopo/topology.hpp"

namespace {

using namespace csgtopo;

const Universe kUniverse({0, 0, 0}, {10, 10, 10});

void BM_RelateBoxes(benchmark::State& state) {
  const Solid a = Solid::box(kUniverse, {1, 1, 1}, {5, 5, 5});
  const Solid b = Solid::box(kUniverse, {3, 3.1, 2.9}, {7, 7, 7});
  auto opts = RelateOptions::defaults_for(kUniverse, state.range(0) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(relate(a, b, opts));
}
BENCHMARK(BM_RelateBoxes)->Arg(0)->Arg(1);

void BM_RelateCurved(benchmark::State& state) {
  const Solid a = Solid::sphere(kUniverse, {5, 5, 5}, 3);
  const Solid b = Solid::capsule(kUniverse, {2, 2, 5}, {8, 8, 5}, 1);
  const auto opts = RelateOptions::defaults_for(kUniverse);
  for (auto _ : state) benchmark::DoNotOptimize(relate(a, b, opts));
}
BENCHMARK(BM_RelateCurved);

// Emptiness of a thin sliver costs depth; the resolution sets how deep.
void BM_IsEmptySliver(benchmark::State& state) {
  const Solid a = Solid::sphere(kUniverse, {5, 5, 5}, 3);
  const Solid b = Solid::sphere(kUniverse, {5, 5, 5}, 2.99);
  const Solid shell = subtract(a, b);
  const double eps = kUniverse.extent() / static_cast<double>(1 << state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(is_empty(shell, eps));
}
BENCHMARK(BM_IsEmptySliver)->DenseRange(6, 10, 2);

void BM_ParseRules(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 100; ++i) {
    text += "Building(?b) ∧ Railway(?r) ∧ swrl_topo:overlaps(?b, ?r) ∧ hasheight(?b, ?h) ∧ "
            "swrlb:greaterThan(?h, " + std::to_string(i) + ") → RailStation" + std::to_string(i) +
            "(?b)\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(parse_rules(text));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ParseRules);

Scene box_scene(std::size_t n) {
  BoxSceneConfig cfg;
  cfg.count = n;
  cfg.seed = 42;
  return generate_box_scene(cfg);
}

const char* const kQuery =
    "Vertical_BoundingBox(?x) ∧ Vertical_BoundingBox(?y) ∧ swrl_topo:overlaps(?x, ?y) → "
    "sqwrl:selectDistinct(?x,?y)";

void BM_OverlapQueryCold(benchmark::State& state) {
  const Scene scene = box_scene(static_cast<std::size_t>(state.range(0)));
  const Query q = parse_query(kQuery);
  EvaluationOptions opts;
  opts.relate = RelateOptions::defaults_for(scene.universe);
  for (auto _ : state) {
    state.PauseTiming();
    KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
    state.ResumeTiming();
    benchmark::DoNotOptimize(query(q, kb, opts));
  }
}
BENCHMARK(BM_OverlapQueryCold)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OverlapQueryCached(benchmark::State& state) {
  const Scene scene = box_scene(static_cast<std::size_t>(state.range(0)));
  const Query q = parse_query(kQuery);
  EvaluationOptions opts;
  opts.relate = RelateOptions::defaults_for(scene.universe);
  KnowledgeBase kb = build_knowledge_base(scene, CharacteristicsProfile::kCorrected);
  query(q, kb, opts);
  for (auto _ : state) benchmark::DoNotOptimize(query(q, kb, opts));
}
BENCHMARK(BM_OverlapQueryCached)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SaturateChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    KnowledgeBase kb;
    kb.declare_property({"next", {Characteristic::kTransitive}, std::nullopt});
    for (int i = 0; i < n; ++i) kb.add_individual({"n" + std::to_string(i), {}, {}, std::nullopt});
    for (int i = 0; i + 1 < n; ++i) {
      kb.assert_property("n" + std::to_string(i), "next", "n" + std::to_string(i + 1));
    }
    state.ResumeTiming();
    saturate(kb);
    benchmark::DoNotOptimize(kb.assertion_count());
  }
}
BENCHMARK(BM_SaturateChain)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
