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
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "evcoref/corpus.h"
#include "evcoref/metrics.h"

namespace evcoref {
namespace {

ChainSet RandomChains(std::mt19937_64& rng, int mentions, int chains) {
  ChainSet set;
  set.chains.resize(chains);
  std::uniform_int_distribution<int> pick(0, chains - 1);
  for (int m = 0; m < mentions; ++m) set.chains[pick(rng)].members.push_back(m);
  return Normalize(set);
}

void BM_CeafE(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int chains = static_cast<int>(state.range(0));
  const ChainSet gold = RandomChains(rng, chains * 4, chains);
  const ChainSet sys = RandomChains(rng, chains * 4, chains);
  for (auto _ : state) benchmark::DoNotOptimize(CeafE(gold, sys));
}
BENCHMARK(BM_CeafE)->Arg(10)->Arg(50)->Arg(200);

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int chains = static_cast<int>(state.range(0));
  const ChainSet gold = RandomChains(rng, chains * 4, chains);
  const ChainSet sys = RandomChains(rng, chains * 4, chains);
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(gold, sys));
}
BENCHMARK(BM_Evaluate)->Arg(10)->Arg(50);

}  // namespace
}  // namespace evcoref
