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

#ifndef EVCOREF_CORPUS_H_
#define EVCOREF_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evcoref {

// Ordered inventory of event-type names. Ordinals are positions in the list.
class TypeInventory {
 public:
  TypeInventory() = default;
  explicit TypeInventory(std::vector<std::string> names);

  // The 18 event subtypes used in KBP event nugget evaluation.
  static TypeInventory Kbp();

  // One type name per line; blank lines and surrounding whitespace ignored.
  static TypeInventory Load(const std::string& path);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int ordinal) const { return names_.at(ordinal); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> Find(std::string_view name) const;

  bool operator==(const TypeInventory& other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

// A single-token event mention.
struct Mention {
  int token_index = 0;
  int event_type = 0;
  std::string chain_id;
};

struct Document {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<Mention> mentions;

  int size() const { return static_cast<int>(tokens.size()); }
};

struct Chain {
  int event_type = 0;
  std::vector<int> members;  // token indices, ascending

  bool operator==(const Chain&) const = default;
};

// Disjoint typed chains; canonical order is by first member.
struct ChainSet {
  std::vector<Chain> chains;

  bool empty() const { return chains.empty(); }
  std::size_t mention_count() const;
  bool operator==(const ChainSet&) const = default;
};

// Sorts members inside each chain and chains by their first member; drops
// empty chains.
ChainSet Normalize(ChainSet set);

// Throws DataError if `doc` breaks any document invariant.
void ValidateDocument(const Document& doc);

// Parses one JSON record. `where` is prefixed to error messages.
Document ParseDocument(std::string_view json_line, const TypeInventory& types,
                       const std::string& where = "");

// Reads a JSON-lines corpus. Errors carry "<source>:<line>:" prefixes.
std::vector<Document> ReadCorpus(std::istream& in, const TypeInventory& types,
                                 const std::string& source = "<stream>");
std::vector<Document> ParseCorpus(const std::string& path,
                                  const TypeInventory& types);

// Groups mentions by chain id. Singletons are kept.
ChainSet GoldChains(const Document& doc);

// Drops tokens at or beyond `max_tokens` together with their mentions.
Document TruncateDocument(const Document& doc, int max_tokens);

// Serializes `doc` with its mentions replaced by `prediction`. Chain ids are
// "p0", "p1", ... in first-mention order.
std::string FormatPrediction(const Document& doc, const ChainSet& prediction,
                             const TypeInventory& types);
void WriteCorpus(std::ostream& out, const std::vector<Document>& docs,
                 const TypeInventory& types);
void WritePredictions(const std::vector<Document>& docs,
                      const std::vector<ChainSet>& predictions,
                      const TypeInventory& types, const std::string& path);

}  // namespace evcoref

#endif  // EVCOREF_CORPUS_H_
