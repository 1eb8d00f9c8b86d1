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
#include <benchmark/benchmark.h>

#include "evcoref/embeddings.h"
#include "evcoref/model.h"
#include "evcoref/nn/tape.h"
#include "evcoref/synthetic_corpus.h"
#include "evcoref/trainer.h"

namespace evcoref {
namespace {

Example MakeExample(int tokens, int width) {
  SyntheticCorpusOptions opts;
  opts.num_documents = 1;
  opts.min_tokens = tokens;
  opts.max_tokens = tokens;
  Document doc = MakeSyntheticCorpus(opts).front();
  LayeredEmbeddings emb = SynthEmbeddings(doc, 1, 4, width, 1.0);
  return {std::move(doc), std::move(emb)};
}

ModelConfig Config(int width) {
  ModelConfig mc;
  mc.layers = 4;
  mc.width = width;
  mc.num_types = 18;
  return mc;
}

void BM_Score(benchmark::State& state) {
  const Example ex = MakeExample(static_cast<int>(state.range(0)), 256);
  CorefModel model(Config(256));
  model.Initialize(1);
  for (auto _ : state) benchmark::DoNotOptimize(model.Score(ex.emb));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Score)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_TrainingStep(benchmark::State& state) {
  const Example ex = MakeExample(static_cast<int>(state.range(0)), 256);
  CorefModel model(Config(256));
  model.Initialize(1);
  TrainConfig tc;
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    nn::Tape tape;
    const DocumentObjective o = BuildObjective(tape, model, ex.doc, ex.emb, tc, &rng);
    tape.Backward(nn::Scale(o.total, -1.0));
    model.parameters().ZeroGrad();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainingStep)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace evcoref
