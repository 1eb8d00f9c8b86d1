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

#ifndef EVCOREF_ERROR_H_
#define EVCOREF_ERROR_H_

#include <stdexcept>
#include <string>

namespace evcoref {

// Base class for all library errors. The subclasses map one-to-one onto
// the CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or command-line arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (corpus, embeddings, inventories).
class DataError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered in values, gradients or objectives.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Checkpoint is corrupt or does not match the run configuration.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

}  // namespace evcoref

#endif  // EVCOREF_ERROR_H_
