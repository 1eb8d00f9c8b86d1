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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "evcoref/checkpoint.h"
#include "evcoref/error.h"
#include "evcoref/model.h"
#include "evcoref/nn/adamax.h"
#include "test_util.h"

namespace evcoref {
namespace {

using testing::Jitter;
using testing::ScratchDir;

ModelConfig SmallConfig() {
  ModelConfig mc;
  mc.layers = 2;
  mc.width = 6;
  mc.num_types = 18;
  mc.ffnn_hidden_units = 7;
  return mc;
}

std::string ReadBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteBytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct Saved {
  std::filesystem::path path;
  CorefModel model{SmallConfig()};
  nn::Adamax optimizer;
};

void SaveTrained(Saved& s, const std::string& dir, bool with_optimizer) {
  s.path = ScratchDir(dir) / "model.e3ck";
  s.model.Initialize(3);
  Jitter(s.model.parameters(), 4, 0.1);
  for (nn::Parameter* p : s.model.parameters().all()) p->grad().setConstant(0.5);
  s.optimizer.Step(s.model.parameters());
  s.optimizer.set_learning_rate(0.00025);
  SaveCheckpoint(s.path.string(), s.model, TypeInventory::Kbp(), R"({"seed": 9})",
                 with_optimizer ? &s.optimizer : nullptr);
}

TEST(Checkpoint, RoundTripIsExact) {
  Saved s;
  SaveTrained(s, "ckpt_roundtrip", true);
  const Checkpoint c = LoadCheckpoint(s.path.string());
  EXPECT_EQ(c.model_config, SmallConfig());
  EXPECT_EQ(c.types, TypeInventory::Kbp());
  EXPECT_EQ(c.run_config_json, R"({"seed": 9})");
  ASSERT_NE(c.model, nullptr);
  for (const nn::Parameter* p : s.model.parameters().all()) {
    EXPECT_EQ(c.model->parameters().Get(p->name()).value(), p->value()) << p->name();
  }
  ASSERT_TRUE(c.optimizer.has_value());
  EXPECT_EQ(c.optimizer->learning_rate(), 0.00025);
  EXPECT_EQ(c.optimizer->step_count(), 1);
  ASSERT_EQ(c.optimizer->moments().size(), s.optimizer.moments().size());
  for (const auto& [name, m] : s.optimizer.moments()) {
    EXPECT_EQ(c.optimizer->moments().at(name).first, m.first);
    EXPECT_EQ(c.optimizer->moments().at(name).infinity, m.infinity);
  }
}

TEST(Checkpoint, SavingTwiceGivesIdenticalBytes) {
  Saved s;
  SaveTrained(s, "ckpt_bytes", true);
  const std::string first = ReadBytes(s.path);
  SaveCheckpoint(s.path.string(), s.model, TypeInventory::Kbp(), R"({"seed": 9})", &s.optimizer);
  EXPECT_EQ(ReadBytes(s.path), first);
  EXPECT_EQ(first.substr(0, 4), "E3CK");
}

TEST(Checkpoint, WithoutOptimizerState) {
  Saved s;
  SaveTrained(s, "ckpt_noopt", false);
  EXPECT_FALSE(LoadCheckpoint(s.path.string()).optimizer.has_value());
}

TEST(Checkpoint, DetectsCorruption) {
  Saved s;
  SaveTrained(s, "ckpt_corrupt", true);
  const std::string bytes = ReadBytes(s.path);
  const auto bad = s.path.parent_path() / "bad.e3ck";

  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x10;
  WriteBytes(bad, flipped);
  EXPECT_THROW(LoadCheckpoint(bad.string()), CheckpointError);

  WriteBytes(bad, bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(LoadCheckpoint(bad.string()), CheckpointError);

  WriteBytes(bad, bytes + "x");
  EXPECT_THROW(LoadCheckpoint(bad.string()), CheckpointError);

  std::string magic = bytes;
  magic[0] = 'X';
  WriteBytes(bad, magic);
  EXPECT_THROW(LoadCheckpoint(bad.string()), CheckpointError);

  WriteBytes(bad, "");
  EXPECT_THROW(LoadCheckpoint(bad.string()), CheckpointError);
  EXPECT_THROW(LoadCheckpoint((s.path.parent_path() / "missing.e3ck").string()),
               CheckpointError);
}

}  // namespace
}  // namespace evcoref
