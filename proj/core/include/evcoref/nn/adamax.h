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

#ifndef EVCOREF_NN_ADAMAX_H_
#define EVCOREF_NN_ADAMAX_H_

#include <cstdint>
#include <map>
#include <string>

#include "evcoref/nn/parameter.h"

namespace evcoref::nn {

struct AdamaxOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adamax (infinity-norm Adam). Step() descends on the gradients currently
// accumulated in the store; callers maximizing an objective accumulate the
// gradient of its negation.
class Adamax {
 public:
  struct Moments {
    Matrix first;     // m
    Matrix infinity;  // u
  };

  explicit Adamax(AdamaxOptions options = {}) : options_(options) {}

  void Step(ParameterStore& params);

  double learning_rate() const { return options_.learning_rate; }
  void set_learning_rate(double lr) { options_.learning_rate = lr; }
  const AdamaxOptions& options() const { return options_; }
  std::int64_t step_count() const { return steps_; }

  // Per-parameter state, keyed by parameter name, for checkpointing.
  const std::map<std::string, Moments>& moments() const { return moments_; }
  void Restore(std::int64_t steps, std::map<std::string, Moments> moments);

 private:
  AdamaxOptions options_;
  std::int64_t steps_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace evcoref::nn

#endif  // EVCOREF_NN_ADAMAX_H_
