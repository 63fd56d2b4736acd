/*
 * Copyright 2026 The topicmap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Multimodal bag-of-words collections, their merge into a common
// vocabulary, and document co-occurrence statistics.

#ifndef TOPICMAP_CORPUS_HPP_
#define TOPICMAP_CORPUS_HPP_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topicmap/common.hpp"

namespace topicmap {

enum class Modality : std::uint8_t { kWord = 0, kTag = 1 };

inline constexpr Modality kAllModalities[] = {Modality::kWord, Modality::kTag};

std::string_view modality_name(Modality modality);
// Throws DataError for anything but "word" / "tag".
Modality parse_modality(std::string_view name);

struct Token {
  std::string surface;
  Modality modality = Modality::kWord;

  // Lexicographic by modality, then surface.
  auto operator<=>(const Token& other) const {
    if (auto cmp = modality <=> other.modality; cmp != 0) return cmp;
    return surface <=> other.surface;
  }
  bool operator==(const Token& other) const = default;

  // "modality:surface", the row key used in model files.
  std::string key() const;
  static Token from_key(std::string_view key);
};

struct Document {
  std::string id;
  std::string collection_id;
  // Sorted by token; every count >= 1.
  std::vector<std::pair<Token, std::uint32_t>> counts;
  std::uint64_t length = 0;
  std::optional<std::string> title;
  std::optional<std::string> raw_text;

  std::uint32_t max_count() const;
};

struct Collection {
  std::string id;
  std::vector<Document> documents;
  std::set<Token> vocabulary;

  std::size_t vocabulary_size(Modality modality) const;
  // A new collection holding the selected documents, vocabulary rebuilt
  // from exactly those documents.
  Collection subset(std::span<const std::size_t> document_indices) const;
  // Rebuilds `vocabulary` from `documents`.
  void rebuild_vocabulary();
};

enum class CorpusFormat { kBagOfWords };

// Parses one corpus file in the `<doc_id> |@word tok[:count] |@tag ...`
// format. Errors carry the 1-based line number.
Collection ingest(const std::filesystem::path& path,
                  const std::string& collection_id,
                  CorpusFormat format = CorpusFormat::kBagOfWords);
Collection ingest_stream(std::istream& input, const std::string& collection_id);

// Writes a collection back in the bag-of-words format (deterministic).
void write_collection(const Collection& collection, std::ostream& output);

class CorpusSet {
 public:
  CorpusSet() = default;

  const std::vector<Collection>& collections() const { return collections_; }
  // Common vocabulary in index order (sorted).
  const std::vector<Token>& tokens() const { return tokens_; }
  std::size_t vocabulary_size() const { return tokens_.size(); }
  std::optional<std::uint32_t> token_index(const Token& token) const;

  // Documents flattened in collection order.
  std::size_t num_documents() const { return documents_.size(); }
  const Document& document(std::size_t index) const {
    const auto [c, d] = documents_[index];
    return collections_[c].documents[d];
  }
  std::optional<std::size_t> document_index(const std::string& id) const;
  std::vector<std::string> document_ids() const;

  // The member collection with the given id, reconstructed (documents and
  // vocabulary) from the merged set.
  Collection project(const std::string& collection_id) const;

  friend CorpusSet merge(std::vector<Collection> collections);

 private:
  std::vector<Collection> collections_;
  std::vector<Token> tokens_;
  std::map<Token, std::uint32_t> index_;
  // (collection, document) positions in flattened order.
  std::vector<std::pair<std::size_t, std::size_t>> documents_;
  std::unordered_map<std::string, std::size_t> document_lookup_;
};

// Union of vocabularies; dense lexicographic token index.
CorpusSet merge(std::vector<Collection> collections);

// Document frequencies, co-document frequencies and augmented-frequency
// tf-idf over a corpus.
class CoocStats {
 public:
  struct Posting {
    std::uint32_t document;
    double tfidf;
  };

  explicit CoocStats(const CorpusSet& corpus, int threads = 0);

  std::size_t n_docs() const { return n_docs_; }
  bool contains(const Token& token) const;
  std::uint32_t doc_freq(const Token& token) const;
  // Zero for pairs that never share a document; symmetric.
  std::uint32_t codoc_freq(const Token& a, const Token& b) const;
  double tfidf(const Token& token, std::size_t document) const;
  std::span<const Posting> postings(const Token& token) const;
  std::size_t stored_pairs() const { return codoc_.size(); }

 private:
  std::optional<std::uint32_t> lookup(const Token& token) const;
  static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b);

  std::size_t n_docs_ = 0;
  std::map<Token, std::uint32_t> index_;
  std::vector<std::uint32_t> doc_freq_;
  std::unordered_map<std::uint64_t, std::uint32_t> codoc_;
  std::vector<std::vector<Posting>> postings_;
};

// Document-level probability estimates p(w) = d(w)/N, p(a,b) = d(a,b)/N.
class TokenProbabilities {
 public:
  explicit TokenProbabilities(const CoocStats& stats) : stats_(&stats) {}
  double p(const Token& token) const;
  double p(const Token& a, const Token& b) const;

 private:
  const CoocStats* stats_;
};
TokenProbabilities estimate_pw(const CoocStats& stats);

// Display-only document metadata read from a JSON-lines sidecar.
struct RawDocument {
  std::string id;
  std::string title;
  std::string author;
  std::string collection;
  std::string text;
  std::vector<std::string> tags;
};

std::map<std::string, RawDocument> load_sidecar(const std::filesystem::path& path);

}  // namespace topicmap

#endif  // TOPICMAP_CORPUS_HPP_
