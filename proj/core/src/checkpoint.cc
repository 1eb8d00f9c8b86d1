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

#include "evcoref/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "evcoref/error.h"
#include "evcoref/random.h"
#include "evcoref/run_config.h"
#include "json.hpp"

namespace evcoref {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[4] = {'E', '3', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  template <typename T>
  void Put(T v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void Bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const char*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  void Name(const std::string& s) {
    Put<std::uint16_t>(static_cast<std::uint16_t>(s.size()));
    Bytes(s.data(), s.size());
  }
  void Tensor(const nn::Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) Put<double>(m(r, c));
    }
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string Bytes(std::size_t n) {
    Need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string Name() { return Bytes(Get<std::uint16_t>()); }
  nn::Matrix Tensor(std::uint32_t rows, std::uint32_t cols) {
    nn::Matrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = Get<double>();
    }
    return m;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void Need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw CheckpointError("checkpoint is truncated");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

void SaveCheckpoint(const std::string& path, const CorefModel& model,
                    const TypeInventory& types, const std::string& run_config_json,
                    const nn::Adamax* optimizer) {
  nlohmann::json meta;
  meta["model"] = nlohmann::json::parse(ModelConfigToJson(model.config()));
  meta["types"] = types.names();
  meta["run_config"] = run_config_json;
  const std::string meta_text = meta.dump();

  Writer w;
  w.Bytes(kMagic, 4);
  w.Put<std::uint32_t>(kVersion);
  w.Put<std::uint64_t>(meta_text.size());
  w.Bytes(meta_text.data(), meta_text.size());

  const auto& params = model.parameters().all();
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    w.Name(p->name());
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(p->value().rows()));
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(p->value().cols()));
    w.Tensor(p->value());
  }

  w.Put<std::uint8_t>(optimizer != nullptr ? 1 : 0);
  if (optimizer != nullptr) {
    w.Put<double>(optimizer->learning_rate());
    w.Put<std::int64_t>(optimizer->step_count());
    w.Put<std::uint32_t>(static_cast<std::uint32_t>(optimizer->moments().size()));
    for (const auto& [name, mom] : optimizer->moments()) {
      w.Name(name);
      w.Put<std::uint32_t>(static_cast<std::uint32_t>(mom.first.rows()));
      w.Put<std::uint32_t>(static_cast<std::uint32_t>(mom.first.cols()));
      w.Tensor(mom.first);
      w.Tensor(mom.infinity);
    }
  }
  const std::uint64_t hash = HashString(w.data());
  w.Put<std::uint64_t>(hash);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint " + path);
  out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  if (!out) throw CheckpointError("failed writing checkpoint " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (data.size() < 4 + 4 + 8 || std::memcmp(data.data(), kMagic, 4) != 0) {
    throw CheckpointError(path + ": not a checkpoint file");
  }
  const std::string_view body(data.data(), data.size() - 8);
  std::uint64_t stored_hash;
  std::memcpy(&stored_hash, data.data() + data.size() - 8, 8);
  if (HashString(body) != stored_hash) {
    throw CheckpointError(path + ": checksum mismatch");
  }

  Reader r(body);
  r.Bytes(4);
  const auto version = r.Get<std::uint32_t>();
  if (version != kVersion) {
    throw CheckpointError(path + ": unsupported version " + std::to_string(version));
  }

  Checkpoint ck;
  const std::string meta_text = r.Bytes(r.Get<std::uint64_t>());
  try {
    const auto meta = nlohmann::json::parse(meta_text);
    ck.model_config = ModelConfigFromJson(meta.at("model").dump());
    ck.types = TypeInventory(meta.at("types").get<std::vector<std::string>>());
    ck.run_config_json = meta.at("run_config").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path + ": bad metadata: " + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(path + ": bad metadata: " + e.what());
  }
  if (ck.types.size() != ck.model_config.num_types) {
    throw CheckpointError(path + ": type inventory does not match model");
  }

  ck.model = std::make_unique<CorefModel>(ck.model_config);
  auto& store = ck.model->parameters();
  const auto count = r.Get<std::uint32_t>();
  if (count != store.all().size()) {
    throw CheckpointError(path + ": parameter count mismatch");
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.Name();
    const auto rows = r.Get<std::uint32_t>();
    const auto cols = r.Get<std::uint32_t>();
    nn::Parameter* p = store.Find(name);
    if (p == nullptr) throw CheckpointError(path + ": unknown parameter " + name);
    if (p->value().rows() != rows || p->value().cols() != cols) {
      throw CheckpointError(path + ": shape mismatch for " + name);
    }
    p->value() = r.Tensor(rows, cols);
  }

  if (r.Get<std::uint8_t>() != 0) {
    nn::AdamaxOptions opts;
    opts.learning_rate = r.Get<double>();
    const auto steps = r.Get<std::int64_t>();
    const auto n = r.Get<std::uint32_t>();
    std::map<std::string, nn::Adamax::Moments> moments;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::string name = r.Name();
      const auto rows = r.Get<std::uint32_t>();
      const auto cols = r.Get<std::uint32_t>();
      nn::Adamax::Moments m;
      m.first = r.Tensor(rows, cols);
      m.infinity = r.Tensor(rows, cols);
      moments.emplace(name, std::move(m));
    }
    ck.optimizer.emplace(opts);
    ck.optimizer->Restore(steps, std::move(moments));
  }
  if (r.remaining() != 0) throw CheckpointError(path + ": trailing bytes");
  return ck;
}

}  // namespace evcoref
