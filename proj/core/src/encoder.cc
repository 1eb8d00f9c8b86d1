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

#include "evcoref/encoder.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "evcoref/error.h"

namespace evcoref {

nn::Var ScalarMix(std::span<const nn::Var> layers, nn::Var logits,
                  nn::Var gamma) {
  if (logits.rows() != 1 || logits.cols() != static_cast<int>(layers.size())) {
    throw std::invalid_argument(
        "scalar mix: " + std::to_string(logits.cols()) + " layer weights for " +
        std::to_string(layers.size()) + " layers");
  }
  const nn::Var alpha = nn::RowSoftmax(logits);
  return nn::ScaleBy(nn::WeightedLayerSum(layers, alpha), gamma);
}

nn::BoolMatrix WindowMask(int n, int window) {
  if (window < 1) throw std::invalid_argument("attention window must be >= 1");
  nn::BoolMatrix mask(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) mask(i, j) = std::abs(i - j) < window;
  }
  return mask;
}

nn::Var AttentionWeights(nn::Var h, int window) {
  if (h.rows() < 1) throw std::invalid_argument("attention over empty sequence");
  if (!h.value().allFinite()) {
    throw NumericError("mask attention: non-finite input");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(h.cols()));
  const nn::Var logits = nn::Scale(nn::MatMulTransB(h, h), scale);
  return nn::MaskedRowSoftmax(logits, WindowMask(h.rows(), window));
}

nn::Var MaskAttention(nn::Var h, int window) {
  return nn::MatMul(AttentionWeights(h, window), h);
}

nn::Matrix ScalarMix(const LayeredEmbeddings& emb, const MixParameters& mix) {
  if (mix.layer_logits.size() != emb.L) {
    throw std::invalid_argument("scalar mix: parameter/embedding layer mismatch");
  }
  nn::Tape tape;
  std::vector<nn::Var> layers;
  for (int j = 0; j < emb.L; ++j) layers.push_back(tape.Constant(emb.Layer(j)));
  nn::Matrix logits = mix.layer_logits.transpose();
  nn::Matrix gamma(1, 1);
  gamma(0, 0) = mix.gamma;
  return ScalarMix(layers, tape.Constant(logits), tape.Constant(gamma)).value();
}

nn::Matrix AttentionWeights(const nn::Matrix& h, int window) {
  nn::Tape tape;
  return AttentionWeights(tape.Constant(h), window).value();
}

nn::Matrix MaskAttention(const nn::Matrix& h, int window) {
  nn::Tape tape;
  return MaskAttention(tape.Constant(h), window).value();
}

}  // namespace evcoref
