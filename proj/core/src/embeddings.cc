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

#include "evcoref/embeddings.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <random>

#include "evcoref/error.h"
#include "evcoref/random.h"

namespace evcoref {
namespace {

constexpr std::array<char, 4> kMagic = {'E', '3', 'C', 'E'};

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

template <typename T>
void PutLittle(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T GetLittle(std::istream& in, const std::string& source, const char* field) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw DataError(source + ": truncated header (" + field + ")");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[i]) << (8 * i);
  }
  return value;
}

std::vector<double> KeyedNormal(std::uint64_t key, int width) {
  std::mt19937_64 rng(key);
  std::vector<double> v(static_cast<std::size_t>(width));
  for (double& x : v) x = StandardNormal(rng);
  return v;
}

}  // namespace

nn::Matrix LayeredEmbeddings::Layer(int layer) const {
  nn::Matrix m(n, d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) m(i, k) = at(i, layer, k);
  }
  return m;
}

std::vector<nn::Matrix> LayeredEmbeddings::Layers() const {
  std::vector<nn::Matrix> out;
  out.reserve(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j) out.push_back(Layer(j));
  return out;
}

LayeredEmbeddings LayeredEmbeddings::Truncated(int tokens) const {
  if (tokens >= n) return *this;
  LayeredEmbeddings out = *this;
  out.n = tokens;
  out.values.resize(static_cast<std::size_t>(tokens) * L * d);
  return out;
}

void ValidateEmbeddings(const LayeredEmbeddings& emb) {
  if (emb.n < 0 || emb.L < 1 || emb.d < 1) {
    throw DataError("embeddings for '" + emb.doc_id + "': invalid shape");
  }
  if (emb.values.size() != static_cast<std::size_t>(emb.n) * emb.L * emb.d) {
    throw DataError("embeddings for '" + emb.doc_id +
                    "': payload size does not match n*L*d");
  }
  for (float v : emb.values) {
    if (!std::isfinite(v)) {
      throw DataError("embeddings for '" + emb.doc_id + "': non-finite value");
    }
  }
}

void WriteEmbeddings(std::ostream& out, const LayeredEmbeddings& emb) {
  ValidateEmbeddings(emb);
  if (emb.doc_id.size() > 0xffff) throw DataError("doc_id too long for E3C-EMB");
  out.write(kMagic.data(), kMagic.size());
  PutLittle<std::uint32_t>(out, kEmbeddingFormatVersion);
  PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(emb.n));
  PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(emb.L));
  PutLittle<std::uint32_t>(out, static_cast<std::uint32_t>(emb.d));
  PutLittle<std::uint16_t>(out, static_cast<std::uint16_t>(emb.doc_id.size()));
  out.write(emb.doc_id.data(), static_cast<std::streamsize>(emb.doc_id.size()));
  for (float v : emb.values) PutLittle<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
}

void WriteEmbeddings(const std::string& path, const LayeredEmbeddings& emb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  WriteEmbeddings(out, emb);
  if (!out) throw DataError("write failed for " + path);
}

LayeredEmbeddings ReadEmbeddings(std::istream& in, const std::string& source) {
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw DataError(source + ": bad magic (not an E3C-EMB file)");
  }
  const auto version = GetLittle<std::uint32_t>(in, source, "version");
  if (version != kEmbeddingFormatVersion) {
    throw DataError(source + ": unsupported E3C-EMB version " +
                    std::to_string(version));
  }
  const std::uint64_t n = GetLittle<std::uint32_t>(in, source, "n");
  const std::uint64_t layers = GetLittle<std::uint32_t>(in, source, "L");
  const std::uint64_t width = GetLittle<std::uint32_t>(in, source, "d");
  constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 40;
  if (layers == 0 || width == 0 || n > std::numeric_limits<int>::max() ||
      layers * width > kMaxValues || n > kMaxValues / (layers * width)) {
    throw DataError(source + ": implausible shape n=" + std::to_string(n) +
                    " L=" + std::to_string(layers) + " d=" + std::to_string(width));
  }
  LayeredEmbeddings emb;
  emb.n = static_cast<int>(n);
  emb.L = static_cast<int>(layers);
  emb.d = static_cast<int>(width);
  const auto id_length = GetLittle<std::uint16_t>(in, source, "doc_id length");
  emb.doc_id.resize(id_length);
  if (!in.read(emb.doc_id.data(), id_length)) {
    throw DataError(source + ": truncated doc_id");
  }
  const std::size_t count = static_cast<std::size_t>(emb.n) * emb.L * emb.d;
  // Check the size against seekable streams before allocating.
  const auto here = in.tellg();
  if (here != std::istream::pos_type(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    if (end != std::istream::pos_type(-1) &&
        static_cast<std::uint64_t>(end - here) < count * std::uint64_t{4}) {
      throw DataError(source + ": truncated payload (expected " +
                      std::to_string(count) + " floats)");
    }
  }
  std::vector<unsigned char> raw(count * 4);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size()))) {
    throw DataError(source + ": truncated payload (expected " +
                    std::to_string(count) + " floats)");
  }
  emb.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= std::uint32_t{raw[4 * i + b]} << (8 * b);
    emb.values[i] = std::bit_cast<float>(bits);
  }
  ValidateEmbeddings(emb);
  return emb;
}

LayeredEmbeddings ReadEmbeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings " + path);
  LayeredEmbeddings emb = ReadEmbeddings(in, path);
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw DataError(path + ": trailing bytes after payload");
  }
  return emb;
}

LayeredEmbeddings LoadEmbeddings(const std::string& path, const Document& doc) {
  LayeredEmbeddings emb = ReadEmbeddings(path);
  if (emb.n != doc.size()) {
    throw DataError(path + ": token count mismatch (file n=" +
                    std::to_string(emb.n) + ", document '" + doc.doc_id +
                    "' has " + std::to_string(doc.size()) + " tokens)");
  }
  if (emb.doc_id != doc.doc_id) {
    throw DataError(path + ": doc_id '" + emb.doc_id + "' does not match '" +
                    doc.doc_id + "'");
  }
  return emb;
}

std::string EmbeddingPath(const std::string& dir, const std::string& doc_id) {
  if (dir.empty()) return doc_id + ".e3ce";
  return dir + (dir.back() == '/' ? "" : "/") + doc_id + ".e3ce";
}

LayeredEmbeddings SynthEmbeddings(const Document& doc, std::uint64_t seed,
                                  int layers, int width, double type_signal) {
  if (layers < 1 || width < 1) {
    throw std::invalid_argument("SynthEmbeddings: layers and width must be >= 1");
  }
  LayeredEmbeddings emb;
  emb.doc_id = doc.doc_id;
  emb.n = doc.size();
  emb.L = layers;
  emb.d = width;
  emb.values.resize(static_cast<std::size_t>(emb.n) * layers * width);
  const std::uint64_t doc_key = CombineKeys(seed, HashString(doc.doc_id));
  for (int i = 0; i < emb.n; ++i) {
    for (int j = 0; j < layers; ++j) {
      std::mt19937_64 rng(CombineKeys(CombineKeys(doc_key, i), j));
      for (int k = 0; k < width; ++k) {
        emb.at(i, j, k) = static_cast<float>(StandardNormal(rng));
      }
    }
  }
  if (type_signal > 0.0) {
    const std::uint64_t type_key = CombineKeys(seed, HashString("#event-type"));
    for (const Mention& m : doc.mentions) {
      const auto type_dir =
          KeyedNormal(CombineKeys(type_key, static_cast<std::uint64_t>(m.event_type)), width);
      const auto chain_dir =
          KeyedNormal(CombineKeys(doc_key, HashString("#chain:" + m.chain_id)), width);
      for (int j = 0; j < layers; ++j) {
        for (int k = 0; k < width; ++k) {
          emb.at(m.token_index, j, k) +=
              static_cast<float>(type_signal * (type_dir[k] + chain_dir[k]));
        }
      }
    }
  }
  return emb;
}

}  // namespace evcoref
