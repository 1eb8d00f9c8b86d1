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

#include "evcoref/nn/dropout.h"

#include <stdexcept>
#include <string>

#include "evcoref/random.h"

namespace evcoref::nn {

Matrix DropoutMask(int rows, int cols, double rate, std::mt19937_64& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout rate must be in [0, 1), got " +
                                std::to_string(rate));
  }
  if (rate == 0.0) return Matrix::Ones(rows, cols);
  const double keep = 1.0 / (1.0 - rate);
  Matrix mask(rows, cols);
  for (Eigen::Index c = 0; c < mask.cols(); ++c) {
    for (Eigen::Index r = 0; r < mask.rows(); ++r) {
      mask(r, c) = UniformUnit(rng) < rate ? 0.0 : keep;
    }
  }
  return mask;
}

Matrix DropoutMask(int rows, int cols, double rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return DropoutMask(rows, cols, rate, rng);
}

}  // namespace evcoref::nn
