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

#ifndef EVCOREF_CHECKPOINT_H_
#define EVCOREF_CHECKPOINT_H_

#include <memory>
#include <optional>
#include <string>

#include "evcoref/corpus.h"
#include "evcoref/model.h"
#include "evcoref/nn/adamax.h"

namespace evcoref {

// Binary checkpoint, little-endian:
//   "E3CK" u32 version=1
//   u64 metadata length, metadata JSON (model config, types, run config)
//   u32 tensor count, per tensor: u16 name length, name, u32 rows, u32 cols,
//     f64 row-major values
//   u8 optimizer flag; if set: f64 lr, i64 steps, u32 count, per entry:
//     u16 name length, name, u32 rows, u32 cols, f64 m values, f64 u values
//   u64 FNV-1a hash of all preceding bytes
struct Checkpoint {
  ModelConfig model_config;
  TypeInventory types;
  std::string run_config_json;  // resolved config of the training run
  std::unique_ptr<CorefModel> model;
  std::optional<nn::Adamax> optimizer;
};

void SaveCheckpoint(const std::string& path, const CorefModel& model,
                    const TypeInventory& types, const std::string& run_config_json,
                    const nn::Adamax* optimizer = nullptr);

// Throws CheckpointError on corruption, truncation or a bad header.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace evcoref

#endif  // EVCOREF_CHECKPOINT_H_
