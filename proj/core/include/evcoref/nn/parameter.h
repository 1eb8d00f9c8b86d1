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

#ifndef EVCOREF_NN_PARAMETER_H_
#define EVCOREF_NN_PARAMETER_H_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace evcoref::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A named trainable tensor (rank <= 2) with its gradient accumulator.
class Parameter {
 public:
  Parameter(std::string name, int rows, int cols);

  const std::string& name() const { return name_; }
  int rows() const { return static_cast<int>(value_.rows()); }
  int cols() const { return static_cast<int>(value_.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(value_.size()); }

  Matrix& value() { return value_; }
  const Matrix& value() const { return value_; }
  Matrix& grad() { return grad_; }
  const Matrix& grad() const { return grad_; }

  void ZeroGrad() { grad_.setZero(); }

 private:
  std::string name_;
  Matrix value_;
  Matrix grad_;
};

// Owns parameters in registration order. Addresses are stable.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;
  ParameterStore(ParameterStore&&) = default;
  ParameterStore& operator=(ParameterStore&&) = default;

  // Throws std::invalid_argument on duplicate names.
  Parameter& Add(const std::string& name, int rows, int cols);
  Parameter* Find(const std::string& name);
  const Parameter* Find(const std::string& name) const;
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  void ZeroGrad();
  // Throws NumericError naming the first parameter with a NaN/Inf gradient.
  void CheckGradientsFinite() const;
  void CheckValuesFinite() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

}  // namespace evcoref::nn

#endif  // EVCOREF_NN_PARAMETER_H_
