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

#include "evcoref/nn/parameter.h"

#include <stdexcept>

#include "evcoref/error.h"

namespace evcoref::nn {

Parameter::Parameter(std::string name, int rows, int cols)
    : name_(std::move(name)),
      value_(Matrix::Zero(rows, cols)),
      grad_(Matrix::Zero(rows, cols)) {}

Parameter& ParameterStore::Add(const std::string& name, int rows, int cols) {
  if (Find(name) != nullptr) {
    throw std::invalid_argument("duplicate parameter name " + name);
  }
  params_.push_back(std::make_unique<Parameter>(name, rows, cols));
  return *params_.back();
}

Parameter* ParameterStore::Find(const std::string& name) {
  for (auto& p : params_) {
    if (p->name() == name) return p.get();
  }
  return nullptr;
}

const Parameter* ParameterStore::Find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p->name() == name) return p.get();
  }
  return nullptr;
}

Parameter& ParameterStore::Get(const std::string& name) {
  Parameter* p = Find(name);
  if (p == nullptr) throw std::out_of_range("no parameter named " + name);
  return *p;
}

const Parameter& ParameterStore::Get(const std::string& name) const {
  const Parameter* p = Find(name);
  if (p == nullptr) throw std::out_of_range("no parameter named " + name);
  return *p;
}

std::vector<Parameter*> ParameterStore::all() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParameterStore::all() const {
  std::vector<const Parameter*> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->size();
  return n;
}

void ParameterStore::ZeroGrad() {
  for (auto& p : params_) p->ZeroGrad();
}

void ParameterStore::CheckGradientsFinite() const {
  for (const auto& p : params_) {
    if (!p->grad().allFinite()) {
      throw NumericError("non-finite gradient in parameter " + p->name());
    }
  }
}

void ParameterStore::CheckValuesFinite() const {
  for (const auto& p : params_) {
    if (!p->value().allFinite()) {
      throw NumericError("non-finite value in parameter " + p->name());
    }
  }
}

}  // namespace evcoref::nn
