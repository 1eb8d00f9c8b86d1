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

#include "evcoref/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "evcoref/error.h"
#include "json.hpp"

namespace evcoref {
namespace {

using json = nlohmann::json;

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string Prefix(const std::string& where) {
  return where.empty() ? std::string() : where + ": ";
}

}  // namespace

TypeInventory::TypeInventory(std::vector<std::string> names)
    : names_(std::move(names)) {
  for (int i = 0; i < size(); ++i) {
    if (names_[i].empty()) throw DataError("type inventory: empty type name");
    if (!index_.emplace(names_[i], i).second) {
      throw DataError("type inventory: duplicate type name '" + names_[i] +
                      "'");
    }
  }
}

TypeInventory TypeInventory::Kbp() {
  return TypeInventory({
      "Attack", "Demonstrate", "Broadcast", "Contact", "Correspondence",
      "Meet", "ArrestJail", "Die", "Injure", "Artifact", "TransportArtifact",
      "TransportPerson", "Elect", "EndPosition", "StartPosition",
      "Transaction", "TransferMoney", "TransferOwnership",
  });
}

TypeInventory TypeInventory::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open type inventory " + path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    line = Trim(line);
    if (!line.empty()) names.push_back(line);
  }
  if (names.empty()) throw DataError("type inventory " + path + " is empty");
  return TypeInventory(std::move(names));
}

std::optional<int> TypeInventory::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ChainSet::mention_count() const {
  std::size_t n = 0;
  for (const Chain& c : chains) n += c.members.size();
  return n;
}

ChainSet Normalize(ChainSet set) {
  std::erase_if(set.chains, [](const Chain& c) { return c.members.empty(); });
  for (Chain& c : set.chains) std::sort(c.members.begin(), c.members.end());
  std::sort(set.chains.begin(), set.chains.end(),
            [](const Chain& a, const Chain& b) {
              return a.members.front() < b.members.front();
            });
  return set;
}

void ValidateDocument(const Document& doc) {
  const std::string who = "document '" + doc.doc_id + "': ";
  if (doc.doc_id.empty()) throw DataError("document with empty doc_id");
  if (doc.tokens.empty()) throw DataError(who + "no tokens");
  std::set<int> seen;
  std::map<std::string, int> chain_type;
  for (const Mention& m : doc.mentions) {
    if (m.token_index < 0 || m.token_index >= doc.size()) {
      throw DataError(who + "mention token_index " +
                      std::to_string(m.token_index) + " out of range [0, " +
                      std::to_string(doc.size()) + ")");
    }
    if (!seen.insert(m.token_index).second) {
      throw DataError(who + "duplicate mention at token_index " +
                      std::to_string(m.token_index));
    }
    if (m.chain_id.empty()) throw DataError(who + "mention with empty chain_id");
    auto [it, inserted] = chain_type.emplace(m.chain_id, m.event_type);
    if (!inserted && it->second != m.event_type) {
      throw DataError(who + "chain '" + m.chain_id + "' mixes event types");
    }
  }
}

Document ParseDocument(std::string_view json_line, const TypeInventory& types,
                       const std::string& where) {
  const std::string prefix = Prefix(where);
  Document doc;
  try {
    const json record = json::parse(json_line);
    if (!record.is_object()) throw DataError(prefix + "record is not an object");
    doc.doc_id = record.at("doc_id").get<std::string>();
    doc.tokens = record.at("tokens").get<std::vector<std::string>>();
    for (const json& m : record.at("mentions")) {
      Mention mention;
      mention.token_index = m.at("token_index").get<int>();
      const auto type_name = m.at("type").get<std::string>();
      const auto type = types.Find(type_name);
      if (!type) {
        throw DataError(prefix + "unknown event type '" + type_name + "'");
      }
      mention.event_type = *type;
      mention.chain_id = m.at("chain_id").get<std::string>();
      doc.mentions.push_back(std::move(mention));
    }
  } catch (const json::exception& e) {
    throw DataError(prefix + "malformed record: " + e.what());
  }
  try {
    ValidateDocument(doc);
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  }
  return doc;
}

std::vector<Document> ReadCorpus(std::istream& in, const TypeInventory& types,
                                 const std::string& source) {
  std::vector<Document> docs;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    docs.push_back(ParseDocument(
        line, types, source + ":" + std::to_string(line_number)));
  }
  return docs;
}

std::vector<Document> ParseCorpus(const std::string& path,
                                  const TypeInventory& types) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path);
  return ReadCorpus(in, types, path);
}

ChainSet GoldChains(const Document& doc) {
  std::map<std::string, Chain> by_id;
  for (const Mention& m : doc.mentions) {
    Chain& chain = by_id[m.chain_id];
    chain.event_type = m.event_type;
    chain.members.push_back(m.token_index);
  }
  ChainSet set;
  for (auto& [id, chain] : by_id) set.chains.push_back(std::move(chain));
  return Normalize(std::move(set));
}

Document TruncateDocument(const Document& doc, int max_tokens) {
  if (doc.size() <= max_tokens) return doc;
  Document out;
  out.doc_id = doc.doc_id;
  out.tokens.assign(doc.tokens.begin(), doc.tokens.begin() + max_tokens);
  for (const Mention& m : doc.mentions) {
    if (m.token_index < max_tokens) out.mentions.push_back(m);
  }
  return out;
}

std::string FormatPrediction(const Document& doc, const ChainSet& prediction,
                             const TypeInventory& types) {
  const ChainSet chains = Normalize(prediction);
  std::vector<std::pair<int, json>> mentions;
  for (std::size_t c = 0; c < chains.chains.size(); ++c) {
    const Chain& chain = chains.chains[c];
    for (int token : chain.members) {
      mentions.emplace_back(token, json{{"token_index", token},
                                        {"type", types.name(chain.event_type)},
                                        {"chain_id", "p" + std::to_string(c)}});
    }
  }
  std::sort(mentions.begin(), mentions.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  json array = json::array();
  for (auto& [token, m] : mentions) array.push_back(std::move(m));
  const json record = {
      {"doc_id", doc.doc_id}, {"tokens", doc.tokens}, {"mentions", array}};
  return record.dump();
}

void WriteCorpus(std::ostream& out, const std::vector<Document>& docs,
                 const TypeInventory& types) {
  for (const Document& doc : docs) {
    json array = json::array();
    for (const Mention& m : doc.mentions) {
      array.push_back({{"token_index", m.token_index},
                       {"type", types.name(m.event_type)},
                       {"chain_id", m.chain_id}});
    }
    out << json{{"doc_id", doc.doc_id},
                {"tokens", doc.tokens},
                {"mentions", array}}
               .dump()
        << '\n';
  }
}

void WritePredictions(const std::vector<Document>& docs,
                      const std::vector<ChainSet>& predictions,
                      const TypeInventory& types, const std::string& path) {
  if (docs.size() != predictions.size()) {
    throw DataError("write_predictions: " + std::to_string(docs.size()) +
                    " documents but " + std::to_string(predictions.size()) +
                    " predictions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out << FormatPrediction(docs[i], predictions[i], types) << '\n';
  }
  if (!out) throw DataError("write failed for " + path);
}

}  // namespace evcoref
