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

#include "evcoref/nn/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "evcoref/random.h"

namespace evcoref::nn {
namespace {

double Evaluate(const std::function<Var(Tape&)>& objective) {
  Tape tape;
  return objective(tape).scalar();
}

std::vector<std::size_t> Coordinates(std::size_t size, std::size_t cap,
                                     std::mt19937_64& rng) {
  std::vector<std::size_t> all(size);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (size <= cap) return all;
  Shuffle(all, rng);
  all.resize(cap);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

GradientCheckResult FiniteDifferenceCheck(
    const std::function<Var(Tape&)>& objective, ParameterStore& params,
    const GradientCheckOptions& options) {
  params.ZeroGrad();
  {
    Tape tape;
    tape.Backward(objective(tape));
  }
  const double base = options.kink_tolerance > 0.0 ? Evaluate(objective) : 0.0;
  GradientCheckResult result;
  std::mt19937_64 rng(options.seed);
  for (Parameter* p : params.all()) {
    const Matrix analytic = p->grad();
    double* data = p->value().data();
    for (std::size_t k :
         Coordinates(p->size(), options.max_coordinates_per_tensor, rng)) {
      const double original = data[k];
      data[k] = original + options.step;
      const double plus = Evaluate(objective);
      data[k] = original - options.step;
      const double minus = Evaluate(objective);
      data[k] = original;
      const double numeric = (plus - minus) / (2.0 * options.step);
      if (options.kink_tolerance > 0.0) {
        const double forward = (plus - base) / options.step;
        const double backward = (base - minus) / options.step;
        const double scale = std::max({std::abs(forward), std::abs(backward),
                                       options.denominator_floor});
        if (std::abs(forward - backward) > options.kink_tolerance * scale) {
          ++result.kinks_skipped;
          continue;
        }
      }
      const double a = analytic.data()[k];
      const double denom = std::max({std::abs(a), std::abs(numeric),
                                     options.denominator_floor});
      const double err = std::abs(a - numeric) / denom;
      ++result.coordinates_checked;
      if (err > result.max_relative_error || result.worst_parameter.empty()) {
        result.max_relative_error = std::max(err, result.max_relative_error);
        if (err >= result.max_relative_error) {
          result.worst_parameter = p->name();
          result.worst_index = k;
          result.worst_analytic = a;
          result.worst_numeric = numeric;
        }
      }
    }
  }
  return result;
}

}  // namespace evcoref::nn
