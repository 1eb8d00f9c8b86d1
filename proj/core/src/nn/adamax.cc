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

#include "evcoref/nn/adamax.h"

#include <cmath>

namespace evcoref::nn {

void Adamax::Step(ParameterStore& params) {
  ++steps_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double step_size =
      options_.learning_rate / (1.0 - std::pow(b1, static_cast<double>(steps_)));
  for (Parameter* p : params.all()) {
    auto [it, fresh] = moments_.try_emplace(p->name());
    Moments& state = it->second;
    if (fresh) {
      state.first = Matrix::Zero(p->rows(), p->cols());
      state.infinity = Matrix::Zero(p->rows(), p->cols());
    }
    const Matrix& g = p->grad();
    state.first = b1 * state.first + (1.0 - b1) * g;
    state.infinity = (b2 * state.infinity).cwiseMax(g.cwiseAbs());
    p->value().array() -= step_size * state.first.array() /
                          (state.infinity.array() + options_.epsilon);
  }
}

void Adamax::Restore(std::int64_t steps, std::map<std::string, Moments> moments) {
  steps_ = steps;
  moments_ = std::move(moments);
}

}  // namespace evcoref::nn
