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

#ifndef EVCOREF_EMBEDDINGS_H_
#define EVCOREF_EMBEDDINGS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "evcoref/corpus.h"
#include "evcoref/nn/parameter.h"

namespace evcoref {

// Frozen per-token, per-layer encoder outputs for one document.
struct LayeredEmbeddings {
  std::string doc_id;
  int n = 0;  // tokens
  int L = 0;  // layers
  int d = 0;  // width
  std::vector<float> values;  // token-major, layer-second, dimension-last

  float at(int token, int layer, int dim) const {
    return values[(static_cast<std::size_t>(token) * L + layer) * d + dim];
  }
  float& at(int token, int layer, int dim) {
    return values[(static_cast<std::size_t>(token) * L + layer) * d + dim];
  }

  // n x d matrix of one layer, widened to double.
  nn::Matrix Layer(int layer) const;
  std::vector<nn::Matrix> Layers() const;

  // Copy restricted to the first `tokens` rows.
  LayeredEmbeddings Truncated(int tokens) const;
};

// Throws DataError on shape inconsistencies or non-finite values.
void ValidateEmbeddings(const LayeredEmbeddings& emb);

// E3C-EMB v1: "E3CE", u32 version, u32 n, u32 L, u32 d, u16 id length,
// id bytes, n*L*d float32; all little-endian.
inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

void WriteEmbeddings(std::ostream& out, const LayeredEmbeddings& emb);
void WriteEmbeddings(const std::string& path, const LayeredEmbeddings& emb);
LayeredEmbeddings ReadEmbeddings(std::istream& in, const std::string& source);
LayeredEmbeddings ReadEmbeddings(const std::string& path);
// Reads and cross-checks n against the document's token count.
LayeredEmbeddings LoadEmbeddings(const std::string& path, const Document& doc);

// "<dir>/<doc_id>.e3ce"
std::string EmbeddingPath(const std::string& dir, const std::string& doc_id);

// Deterministic stand-in for encoder output. Every (doc_id, token, layer)
// row is an independent standard-normal draw keyed by `seed`. With
// `type_signal` > 0, gold mention tokens additionally receive
//   type_signal * (type_direction[type] + chain_direction[doc_id, chain])
// on every layer. Both are keyed unit-variance vectors; the type direction
// is shared across documents and the chain direction is private to one
// chain of one document.
LayeredEmbeddings SynthEmbeddings(const Document& doc, std::uint64_t seed,
                                  int layers, int width,
                                  double type_signal = 0.0);

}  // namespace evcoref

#endif  // EVCOREF_EMBEDDINGS_H_
