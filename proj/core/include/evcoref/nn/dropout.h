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

#ifndef EVCOREF_NN_DROPOUT_H_
#define EVCOREF_NN_DROPOUT_H_

#include <cstdint>
#include <random>

#include "evcoref/nn/parameter.h"

namespace evcoref::nn {

// Inverted-dropout mask: 0 with probability `rate`, else 1 / (1 - rate).
// Throws std::invalid_argument unless 0 <= rate < 1.
Matrix DropoutMask(int rows, int cols, double rate, std::mt19937_64& rng);
Matrix DropoutMask(int rows, int cols, double rate, std::uint64_t seed);

}  // namespace evcoref::nn

#endif  // EVCOREF_NN_DROPOUT_H_
