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

#include "evcoref/synthetic_corpus.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "evcoref/random.h"

namespace evcoref {
namespace {

int IntBetween(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(UniformIndex(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

int Index(std::mt19937_64& rng, int n) {
  return static_cast<int>(UniformIndex(rng, static_cast<std::uint64_t>(n)));
}

}  // namespace

std::vector<Document> MakeSyntheticCorpus(const SyntheticCorpusOptions& o) {
  if (o.num_documents < 0 || o.min_tokens < 10 || o.max_tokens < o.min_tokens ||
      o.num_types < 1 || o.min_chains < 1 || o.max_chains < o.min_chains ||
      !(o.mention_density > 0.0 && o.mention_density <= 1.0)) {
    throw std::invalid_argument("MakeSyntheticCorpus: bad options");
  }
  std::mt19937_64 rng(CombineKeys(o.seed, HashString("#synthetic-corpus")));
  std::vector<Document> docs;
  docs.reserve(o.num_documents);
  for (int d = 0; d < o.num_documents; ++d) {
    Document doc;
    doc.doc_id = o.id_prefix + "-" + std::to_string(d);
    const int n = IntBetween(rng, o.min_tokens, o.max_tokens);
    for (int i = 0; i < n; ++i) {
      doc.tokens.push_back("w" + std::to_string(Index(rng, 500)));
    }
    const int budget =
        std::max(1, static_cast<int>(std::floor(o.mention_density * n)));
    const int chains =
        std::min(budget, IntBetween(rng, o.min_chains, o.max_chains));
    // One mention per chain first, then spread the rest.
    std::vector<int> chain_of;
    for (int c = 0; c < chains; ++c) chain_of.push_back(c);
    const int total = std::max(chains, IntBetween(rng, chains, budget));
    for (int k = chains; k < total; ++k) chain_of.push_back(Index(rng, chains));

    std::vector<int> positions(n);
    for (int i = 0; i < n; ++i) positions[i] = i;
    Shuffle(positions, rng);
    positions.resize(chain_of.size());
    std::sort(positions.begin(), positions.end());
    Shuffle(chain_of, rng);

    std::vector<int> chain_type(chains);
    for (int c = 0; c < chains; ++c) {
      if (c > 0 && UniformUnit(rng) < o.shared_type_rate) {
        chain_type[c] = chain_type[Index(rng, c)];
      } else {
        chain_type[c] = Index(rng, o.num_types);
      }
    }
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const int c = chain_of[k];
      doc.mentions.push_back({positions[k], chain_type[c], "c" + std::to_string(c)});
      doc.tokens[positions[k]] = "ev" + std::to_string(chain_type[c]);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace evcoref
