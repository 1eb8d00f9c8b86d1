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

#include "evcoref/run_config.h"

#include <fstream>
#include <sstream>

#include "evcoref/error.h"
#include "json.hpp"

namespace evcoref {
namespace {

using json = nlohmann::json;

template <typename T>
void Read(const json& j, const char* key, T& out) {
  out = j.at(key).get<T>();
}

std::string DistanceModeName(DistanceMode m) {
  return m == DistanceMode::kOrdinal ? "ordinal" : "token";
}

DistanceMode ParseDistanceMode(const std::string& s) {
  if (s == "ordinal") return DistanceMode::kOrdinal;
  if (s == "token") return DistanceMode::kToken;
  throw ConfigError("distance_mode must be 'ordinal' or 'token', got '" + s + "'");
}

json ModelJson(const ModelConfig& m) {
  return {{"layers", m.layers},
          {"width", m.width},
          {"num_types", m.num_types},
          {"attention_window", m.attention_window},
          {"word_dropout", m.word_dropout},
          {"ffnn_hidden_layers", m.ffnn_hidden_layers},
          {"ffnn_hidden_units", m.ffnn_hidden_units},
          {"ffnn_dropout", m.ffnn_dropout},
          {"distance_width", m.distance_width},
          {"max_antecedents", m.max_antecedents},
          {"top_span_ratio", m.top_span_ratio},
          {"distance_mode", DistanceModeName(m.distance_mode)}};
}

}  // namespace

void RunConfig::Sync() {
  train.seed = seed;
  train.refine = refine;
  train.dev_decode = decode;
  train.decode_options = decode_options;
  train.workers = workers;
}

std::string DecodeModeName(DecodeMode mode) {
  switch (mode) {
    case DecodeMode::kTypeGuided:
      return "type-guided";
    case DecodeMode::kNaive:
      return "naive";
    case DecodeMode::kTypeRule:
      return "type-rule";
  }
  return "type-guided";
}

DecodeMode ParseDecodeMode(const std::string& name) {
  if (name == "type-guided") return DecodeMode::kTypeGuided;
  if (name == "naive") return DecodeMode::kNaive;
  if (name == "type-rule") return DecodeMode::kTypeRule;
  throw ConfigError("decode must be one of type-guided, naive, type-rule; got '" +
                    name + "'");
}

void ApplyConfigJson(RunConfig& c, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "corpus") c.corpus_path = value.get<std::string>();
      else if (key == "dev") c.dev_path = value.get<std::string>();
      else if (key == "embeddings") c.embeddings_dir = value.get<std::string>();
      else if (key == "checkpoint") c.checkpoint_path = value.get<std::string>();
      else if (key == "output") c.output_path = value.get<std::string>();
      else if (key == "types") c.types_path = value.get<std::string>();
      else if (key == "mini_batch_size") c.train.batch_size = value.get<int>();
      else if (key == "max_epochs") c.train.max_epochs = value.get<int>();
      else if (key == "early_stopping_patience") c.train.early_stopping_patience = value.get<int>();
      else if (key == "max_antecedents") c.model.max_antecedents = value.get<int>();
      else if (key == "max_document_length") c.train.max_document_length = value.get<int>();
      else if (key == "word_dropout") c.model.word_dropout = value.get<double>();
      else if (key == "ffnn_dropout") c.model.ffnn_dropout = value.get<double>();
      else if (key == "ffnn_hidden_layers") c.model.ffnn_hidden_layers = value.get<int>();
      else if (key == "ffnn_hidden_units") c.model.ffnn_hidden_units = value.get<int>();
      else if (key == "optimizer") {
        if (value.get<std::string>() != "adamax") {
          throw ConfigError("only optimizer 'adamax' is supported");
        }
      }
      else if (key == "initial_learning_rate") c.train.learning_rate = value.get<double>();
      else if (key == "lr_anneal_factor") c.train.anneal_factor = value.get<double>();
      else if (key == "lr_anneal_patience") c.train.anneal_patience = value.get<int>();
      else if (key == "proposal_loss_weight") c.train.proposal_weight = value.get<double>();
      else if (key == "attention_window") c.model.attention_window = value.get<int>();
      else if (key == "distance_width") c.model.distance_width = value.get<int>();
      else if (key == "distance_mode") c.model.distance_mode = ParseDistanceMode(value.get<std::string>());
      else if (key == "top_span_ratio") c.model.top_span_ratio = value.get<double>();
      else if (key == "first_pass_loss") c.train.first_pass_loss = value.get<bool>();
      else if (key == "keep_filtered_candidates") c.decode_options.keep_filtered_candidates = value.get<bool>();
      else if (key == "decode") c.decode = ParseDecodeMode(value.get<std::string>());
      else if (key == "refine") c.refine = value.get<bool>();
      else if (key == "workers") c.workers = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
  c.Sync();
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c;
  ApplyConfigJson(c, ss.str());
  return c;
}

std::string RunConfigToJson(const RunConfig& c) {
  const json j = {
      {"corpus", c.corpus_path},
      {"dev", c.dev_path},
      {"embeddings", c.embeddings_dir},
      {"checkpoint", c.checkpoint_path},
      {"output", c.output_path},
      {"types", c.types_path},
      {"mini_batch_size", c.train.batch_size},
      {"max_epochs", c.train.max_epochs},
      {"early_stopping_patience", c.train.early_stopping_patience},
      {"max_antecedents", c.model.max_antecedents},
      {"max_document_length", c.train.max_document_length},
      {"word_dropout", c.model.word_dropout},
      {"ffnn_dropout", c.model.ffnn_dropout},
      {"ffnn_hidden_layers", c.model.ffnn_hidden_layers},
      {"ffnn_hidden_units", c.model.ffnn_hidden_units},
      {"optimizer", "adamax"},
      {"initial_learning_rate", c.train.learning_rate},
      {"lr_anneal_factor", c.train.anneal_factor},
      {"lr_anneal_patience", c.train.anneal_patience},
      {"proposal_loss_weight", c.train.proposal_weight},
      {"attention_window", c.model.attention_window},
      {"distance_width", c.model.distance_width},
      {"distance_mode", DistanceModeName(c.model.distance_mode)},
      {"top_span_ratio", c.model.top_span_ratio},
      {"first_pass_loss", c.train.first_pass_loss},
      {"keep_filtered_candidates", c.decode_options.keep_filtered_candidates},
      {"decode", DecodeModeName(c.decode)},
      {"refine", c.refine},
      {"workers", c.workers},
      {"seed", c.seed},
  };
  return j.dump(2);
}

std::string ModelConfigToJson(const ModelConfig& config) {
  return ModelJson(config).dump();
}

ModelConfig ModelConfigFromJson(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    ModelConfig m;
    Read(j, "layers", m.layers);
    Read(j, "width", m.width);
    Read(j, "num_types", m.num_types);
    Read(j, "attention_window", m.attention_window);
    Read(j, "word_dropout", m.word_dropout);
    Read(j, "ffnn_hidden_layers", m.ffnn_hidden_layers);
    Read(j, "ffnn_hidden_units", m.ffnn_hidden_units);
    Read(j, "ffnn_dropout", m.ffnn_dropout);
    Read(j, "distance_width", m.distance_width);
    Read(j, "max_antecedents", m.max_antecedents);
    Read(j, "top_span_ratio", m.top_span_ratio);
    m.distance_mode = ParseDistanceMode(j.at("distance_mode").get<std::string>());
    return m;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("bad model config: ") + e.what());
  }
}

}  // namespace evcoref
