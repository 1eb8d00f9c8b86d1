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

#ifndef EVCOREF_ENCODER_H_
#define EVCOREF_ENCODER_H_

#include <span>

#include "evcoref/embeddings.h"
#include "evcoref/nn/parameter.h"
#include "evcoref/nn/tape.h"

namespace evcoref {

inline constexpr int kDefaultAttentionWindow = 10;

struct MixParameters {
  nn::Vector layer_logits;  // pre-softmax, length L
  double gamma = 1.0;

  static MixParameters Uniform(int layers) {
    return {nn::Vector::Zero(layers), 1.0};
  }
};

// h_i = gamma * sum_j softmax(logits)_j x_i^(j). `logits` is 1 x L and
// `gamma` 1 x 1.
nn::Var ScalarMix(std::span<const nn::Var> layers, nn::Var logits,
                  nn::Var gamma);

// True where |i - j| < window. The diagonal is always admissible.
nn::BoolMatrix WindowMask(int n, int window);

// softmax(H H^T / sqrt(d) + M) with M = 0 inside the window and -inf
// outside; masked weights are exactly zero.
nn::Var AttentionWeights(nn::Var h, int window);
// C = AttentionWeights(H) H. No learned projections.
nn::Var MaskAttention(nn::Var h, int window);

// Value-only conveniences.
nn::Matrix ScalarMix(const LayeredEmbeddings& emb, const MixParameters& mix);
nn::Matrix AttentionWeights(const nn::Matrix& h, int window);
nn::Matrix MaskAttention(const nn::Matrix& h, int window);

}  // namespace evcoref

#endif  // EVCOREF_ENCODER_H_
