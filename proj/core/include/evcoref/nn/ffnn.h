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

#ifndef EVCOREF_NN_FFNN_H_
#define EVCOREF_NN_FFNN_H_

#include <random>
#include <string>
#include <vector>

#include "evcoref/nn/parameter.h"
#include "evcoref/nn/tape.h"

namespace evcoref::nn {

struct FfnnConfig {
  int input_width = 0;
  int hidden_layers = 2;
  int hidden_units = 150;
  int output_width = 1;
  double dropout = 0.2;
};

// Rectified feed-forward scorer: `hidden_layers` ReLU layers followed by a
// linear output layer. Dropout hits hidden activations only.
class Ffnn {
 public:
  // Registers "<prefix>.w<k>" (in x out) and "<prefix>.b<k>" (1 x out).
  Ffnn(ParameterStore& store, const std::string& prefix, FfnnConfig config);

  // Glorot-uniform weights, zero biases. With `zero_output` the final
  // layer weights start at 0 so that every initial score is exactly 0.
  void Initialize(std::mt19937_64& rng, bool zero_output) const;

  // x is rows x input_width; returns rows x output_width. `dropout_rng`
  // null means evaluation mode.
  Var Forward(Tape& tape, Var x, std::mt19937_64* dropout_rng) const;

  const FfnnConfig& config() const { return config_; }

 private:
  FfnnConfig config_;
  std::vector<Parameter*> weights_;
  std::vector<Parameter*> biases_;
};

// Uniform in +-sqrt(6 / (rows + cols)).
void GlorotUniform(Matrix& m, std::mt19937_64& rng);

}  // namespace evcoref::nn

#endif  // EVCOREF_NN_FFNN_H_
