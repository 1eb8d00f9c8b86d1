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

#ifndef EVCOREF_NN_GRADIENT_CHECK_H_
#define EVCOREF_NN_GRADIENT_CHECK_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "evcoref/nn/parameter.h"
#include "evcoref/nn/tape.h"

namespace evcoref::nn {

struct GradientCheckOptions {
  double step = 1e-4;
  // Tensors larger than this are checked on a seeded sample of this many
  // coordinates; smaller tensors are checked exhaustively.
  std::size_t max_coordinates_per_tensor = 200;
  std::uint64_t seed = 0;
  // Relative error is |a - n| / max(|a|, |n|, floor).
  double denominator_floor = 1e-6;
  // When positive, coordinates whose forward and backward one-sided
  // differences disagree by more than this (relative) straddle a kink and
  // are skipped instead of compared.
  double kink_tolerance = 0.0;
};

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
  std::size_t kinks_skipped = 0;
};

// Records `objective` on fresh tapes, backpropagates once for the analytic
// gradient and compares it against central differences. The objective must
// be deterministic. Parameter values are restored; gradients are left
// holding the analytic result.
GradientCheckResult FiniteDifferenceCheck(
    const std::function<Var(Tape&)>& objective, ParameterStore& params,
    const GradientCheckOptions& options = {});

}  // namespace evcoref::nn

#endif  // EVCOREF_NN_GRADIENT_CHECK_H_
