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

#ifndef EVCOREF_SYNTHETIC_CORPUS_H_
#define EVCOREF_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "evcoref/corpus.h"

namespace evcoref {

struct SyntheticCorpusOptions {
  int num_documents = 20;
  int min_tokens = 60;
  int max_tokens = 100;
  int num_types = 18;
  // Chains per document, drawn uniformly from [min_chains, max_chains].
  int min_chains = 2;
  int max_chains = 4;
  // Chance that a chain reuses the type of an earlier chain in its document.
  double shared_type_rate = 0.3;
  // Upper bound on mentions per document as a fraction of its tokens.
  double mention_density = 0.1;
  std::uint64_t seed = 1;
  std::string id_prefix = "synth";
};

// Random single-token mention documents. A document never holds more than
// max(1, floor(mention_density * n)) mentions; at the default density
// top-span pruning can keep all of them.
std::vector<Document> MakeSyntheticCorpus(const SyntheticCorpusOptions& options);

}  // namespace evcoref

#endif  // EVCOREF_SYNTHETIC_CORPUS_H_
