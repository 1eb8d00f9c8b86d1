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

#ifndef EVCOREF_RUN_CONFIG_H_
#define EVCOREF_RUN_CONFIG_H_

#include <string>

#include "evcoref/decoder.h"
#include "evcoref/model.h"
#include "evcoref/trainer.h"

namespace evcoref {

// Fully resolved settings of one CLI run. Keys in the JSON form follow the
// hyper-parameter names in snake_case, e.g. "max_epochs",
// "initial_learning_rate", "lr_anneal_patience".
struct RunConfig {
  std::string corpus_path;
  std::string dev_path;
  std::string embeddings_dir;
  std::string checkpoint_path;
  std::string output_path;
  std::string types_path;  // empty: built-in 18-type inventory

  ModelConfig model;  // layers/width/num_types are resolved from the data
  TrainConfig train;
  DecodeMode decode = DecodeMode::kTypeGuided;
  bool refine = true;
  DecodeOptions decode_options;
  int workers = 1;
  std::uint64_t seed = 1;

  // Copies seed/refine/decode/workers into `train`.
  void Sync();
};

// Overlays the keys present in `json_text`; unknown keys are a ConfigError.
void ApplyConfigJson(RunConfig& config, const std::string& json_text);
RunConfig LoadRunConfig(const std::string& path);
std::string RunConfigToJson(const RunConfig& config);

std::string ModelConfigToJson(const ModelConfig& config);
ModelConfig ModelConfigFromJson(const std::string& json_text);

std::string DecodeModeName(DecodeMode mode);
DecodeMode ParseDecodeMode(const std::string& name);

}  // namespace evcoref

#endif  // EVCOREF_RUN_CONFIG_H_
