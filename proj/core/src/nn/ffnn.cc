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

#include "evcoref/nn/ffnn.h"

#include <cmath>
#include <stdexcept>

#include "evcoref/nn/dropout.h"
#include "evcoref/random.h"

namespace evcoref::nn {

void GlorotUniform(Matrix& m, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = UniformRange(rng, -limit, limit);
    }
  }
}

Ffnn::Ffnn(ParameterStore& store, const std::string& prefix, FfnnConfig config)
    : config_(config) {
  if (config_.input_width < 1 || config_.hidden_layers < 0 ||
      config_.hidden_units < 1 || config_.output_width < 1) {
    throw std::invalid_argument("invalid FFNN configuration for " + prefix);
  }
  int in = config_.input_width;
  for (int k = 0; k <= config_.hidden_layers; ++k) {
    const int out =
        k == config_.hidden_layers ? config_.output_width : config_.hidden_units;
    weights_.push_back(&store.Add(prefix + ".w" + std::to_string(k), in, out));
    biases_.push_back(&store.Add(prefix + ".b" + std::to_string(k), 1, out));
    in = out;
  }
}

void Ffnn::Initialize(std::mt19937_64& rng, bool zero_output) const {
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (zero_output && k + 1 == weights_.size()) {
      weights_[k]->value().setZero();
    } else {
      GlorotUniform(weights_[k]->value(), rng);
    }
    biases_[k]->value().setZero();
  }
}

Var Ffnn::Forward(Tape& tape, Var x, std::mt19937_64* dropout_rng) const {
  if (x.cols() != config_.input_width) {
    throw std::invalid_argument("FFNN input width " + std::to_string(x.cols()) +
                                " != " + std::to_string(config_.input_width));
  }
  Var h = x;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    h = AddRowBroadcast(MatMul(h, tape.Input(*weights_[k])),
                        tape.Input(*biases_[k]));
    if (k + 1 < weights_.size()) {
      h = Relu(h);
      if (dropout_rng != nullptr && config_.dropout > 0.0) {
        h = MulConstant(h, DropoutMask(h.rows(), h.cols(), config_.dropout,
                                       *dropout_rng));
      }
    }
  }
  return h;
}

}  // namespace evcoref::nn
