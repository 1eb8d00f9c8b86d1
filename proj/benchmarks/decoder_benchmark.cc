// Copyright 2026 The evcoref Authors.
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
#include <algorithm>
#include <random>

#include <benchmark/benchmark.h>

#include "evcoref/decoder.h"
#include "evcoref/score_table.h"

namespace evcoref {
namespace {

ScoreTable RandomTable(std::mt19937_64& rng, int spans, int types, int window) {
  std::normal_distribution<double> normal(0.0, 2.0);
  ScoreTable t;
  t.type_mention_scores.assign(types, 0.0);
  for (int i = 0; i < spans; ++i) {
    SpanScores s;
    s.token = 3 * i;
    for (int j = std::max(0, i - window); j < i; ++j) s.antecedents.push_back({j, normal(rng), 0.0});
    for (int k = 0; k < types; ++k) s.type_scores.push_back(normal(rng));
    s.type_similarity.assign(types, 0.0);
    t.spans.push_back(std::move(s));
  }
  return t;
}

void BM_DecodeTypeGuided(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ScoreTable t = RandomTable(rng, static_cast<int>(state.range(0)), 18, 50);
  for (auto _ : state) benchmark::DoNotOptimize(DecodeTypeGuided(t));
}
BENCHMARK(BM_DecodeTypeGuided)->Arg(20)->Arg(100);

void BM_DecodeNaive(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const ScoreTable t = RandomTable(rng, static_cast<int>(state.range(0)), 18, 50);
  for (auto _ : state) benchmark::DoNotOptimize(DecodeNaive(t));
}
BENCHMARK(BM_DecodeNaive)->Arg(20)->Arg(100);

}  // namespace
}  // namespace evcoref
