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

#include "topicmap/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include <omp.h>

namespace topicmap {

std::string_view modality_name(Modality modality) {
  switch (modality) {
    case Modality::kWord:
      return "word";
    case Modality::kTag:
      return "tag";
  }
  return "word";
}

Modality parse_modality(std::string_view name) {
  if (name == "word") return Modality::kWord;
  if (name == "tag") return Modality::kTag;
  throw DataError("unknown modality '" + std::string(name) + "'");
}

std::string Token::key() const {
  std::string out(modality_name(modality));
  out += ':';
  out += surface;
  return out;
}

Token Token::from_key(std::string_view key) {
  const auto colon = key.find(':');
  if (colon == std::string_view::npos || colon + 1 == key.size()) {
    throw DataError("malformed token key '" + std::string(key) + "'");
  }
  return Token{std::string(key.substr(colon + 1)),
               parse_modality(key.substr(0, colon))};
}

std::uint32_t Document::max_count() const {
  std::uint32_t best = 0;
  for (const auto& [token, count] : counts) best = std::max(best, count);
  return best;
}

std::size_t Collection::vocabulary_size(Modality modality) const {
  return static_cast<std::size_t>(std::count_if(
      vocabulary.begin(), vocabulary.end(),
      [modality](const Token& t) { return t.modality == modality; }));
}

void Collection::rebuild_vocabulary() {
  vocabulary.clear();
  for (const auto& doc : documents) {
    for (const auto& [token, count] : doc.counts) vocabulary.insert(token);
  }
}

Collection Collection::subset(std::span<const std::size_t> document_indices) const {
  Collection out;
  out.id = id;
  out.documents.reserve(document_indices.size());
  for (std::size_t index : document_indices) {
    if (index >= documents.size()) {
      throw ArgumentError("Collection::subset: index out of range");
    }
    out.documents.push_back(documents[index]);
  }
  out.rebuild_vocabulary();
  return out;
}

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

[[noreturn]] void fail_at(std::size_t line_number, const std::string& what) {
  throw DataError("line " + std::to_string(line_number) + ": " + what);
}

Document parse_line(std::string_view line, std::size_t line_number,
                    const std::string& collection_id) {
  const auto fields = split_whitespace(line);
  Document doc;
  doc.id = std::string(fields.front());
  doc.collection_id = collection_id;
  if (doc.id.starts_with("|")) fail_at(line_number, "missing document id");

  std::map<Token, std::uint64_t> counts;
  Modality modality = Modality::kWord;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    std::string_view field = fields[i];
    if (field.starts_with("|@")) {
      try {
        modality = parse_modality(field.substr(2));
      } catch (const DataError& e) {
        fail_at(line_number, e.what());
      }
      continue;
    }
    if (field.starts_with("|")) {
      fail_at(line_number, "malformed modality marker '" + std::string(field) + "'");
    }
    std::string_view surface = field;
    std::uint64_t count = 1;
    if (const auto colon = field.rfind(':'); colon != std::string_view::npos) {
      std::string_view suffix = field.substr(colon + 1);
      std::int64_t parsed = 0;
      const auto [ptr, ec] =
          std::from_chars(suffix.data(), suffix.data() + suffix.size(), parsed);
      if (ec == std::errc() && ptr == suffix.data() + suffix.size() && !suffix.empty()) {
        if (parsed == 0) fail_at(line_number, "zero-count token '" + std::string(field) + "'");
        if (parsed < 0) fail_at(line_number, "negative count '" + std::string(field) + "'");
        surface = field.substr(0, colon);
        count = static_cast<std::uint64_t>(parsed);
      }
    }
    if (surface.empty()) fail_at(line_number, "empty token '" + std::string(field) + "'");
    counts[Token{std::string(surface), modality}] += count;
  }
  if (counts.empty()) fail_at(line_number, "empty document '" + doc.id + "'");

  for (const auto& [token, count] : counts) {
    if (count > UINT32_MAX) fail_at(line_number, "count overflow");
    doc.counts.emplace_back(token, static_cast<std::uint32_t>(count));
    doc.length += count;
  }
  return doc;
}

}  // namespace

Collection ingest_stream(std::istream& input, const std::string& collection_id) {
  Collection collection;
  collection.id = collection_id;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    Document doc = parse_line(line, line_number, collection_id);
    if (!seen.insert(doc.id).second) {
      fail_at(line_number, "duplicate document id '" + doc.id + "'");
    }
    for (const auto& [token, count] : doc.counts) collection.vocabulary.insert(token);
    collection.documents.push_back(std::move(doc));
  }
  return collection;
}

Collection ingest(const std::filesystem::path& path, const std::string& collection_id,
                  CorpusFormat format) {
  if (format != CorpusFormat::kBagOfWords) throw ArgumentError("unsupported corpus format");
  std::ifstream input(path);
  if (!input) throw DataError("cannot open corpus file " + path.string());
  try {
    return ingest_stream(input, collection_id);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_collection(const Collection& collection, std::ostream& output) {
  for (const auto& doc : collection.documents) {
    output << doc.id;
    std::optional<Modality> current;
    for (const auto& [token, count] : doc.counts) {
      if (current != token.modality) {
        output << " |@" << modality_name(token.modality);
        current = token.modality;
      }
      output << ' ' << token.surface;
      if (count != 1) output << ':' << count;
    }
    output << '\n';
  }
}

std::optional<std::uint32_t> CorpusSet::token_index(const Token& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CorpusSet::document_index(const std::string& id) const {
  const auto it = document_lookup_.find(id);
  if (it == document_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> CorpusSet::document_ids() const {
  std::vector<std::string> ids;
  ids.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) ids.push_back(document(i).id);
  return ids;
}

Collection CorpusSet::project(const std::string& collection_id) const {
  for (const auto& collection : collections_) {
    if (collection.id == collection_id) return collection;
  }
  throw ArgumentError("unknown collection '" + collection_id + "'");
}

CorpusSet merge(std::vector<Collection> collections) {
  CorpusSet out;
  std::set<std::string> ids;
  std::set<Token> vocabulary;
  for (const auto& collection : collections) {
    if (!ids.insert(collection.id).second) {
      throw DataError("duplicate collection id '" + collection.id + "'");
    }
    vocabulary.insert(collection.vocabulary.begin(), collection.vocabulary.end());
  }
  out.collections_ = std::move(collections);
  out.tokens_.assign(vocabulary.begin(), vocabulary.end());
  for (std::uint32_t i = 0; i < out.tokens_.size(); ++i) out.index_.emplace(out.tokens_[i], i);

  for (std::size_t c = 0; c < out.collections_.size(); ++c) {
    const auto& docs = out.collections_[c].documents;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (!out.document_lookup_.emplace(docs[d].id, out.documents_.size()).second) {
        throw DataError("duplicate document id '" + docs[d].id + "' across collections");
      }
      out.documents_.emplace_back(c, d);
    }
  }
  return out;
}

std::uint64_t CoocStats::pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

CoocStats::CoocStats(const CorpusSet& corpus, int threads) {
  if (corpus.num_documents() == 0) throw ArgumentError("CoocStats: empty corpus");
  n_docs_ = corpus.num_documents();
  const auto& tokens = corpus.tokens();
  for (std::uint32_t i = 0; i < tokens.size(); ++i) index_.emplace(tokens[i], i);
  doc_freq_.assign(tokens.size(), 0);
  postings_.assign(tokens.size(), {});

  std::vector<std::vector<std::uint32_t>> doc_tokens(n_docs_);
  for (std::size_t d = 0; d < n_docs_; ++d) {
    const auto& doc = corpus.document(d);
    auto& ids = doc_tokens[d];
    ids.reserve(doc.counts.size());
    for (const auto& [token, count] : doc.counts) {
      const auto index = *corpus.token_index(token);
      ids.push_back(index);
      ++doc_freq_[index];
    }
  }
  for (std::size_t d = 0; d < n_docs_; ++d) {
    const auto& doc = corpus.document(d);
    const double max_count = doc.max_count();
    for (std::size_t k = 0; k < doc.counts.size(); ++k) {
      const auto index = doc_tokens[d][k];
      const double tf = 0.5 + doc.counts[k].second / max_count;
      const double idf = std::log(static_cast<double>(n_docs_) / doc_freq_[index]);
      postings_[index].push_back({static_cast<std::uint32_t>(d), tf * idf});
    }
  }

  // Pair counts are integers, so the merge order of per-thread maps does
  // not affect the result.
  const int n = static_cast<int>(n_docs_);
#pragma omp parallel num_threads(threads > 0 ? threads : omp_get_max_threads()) if (threads != 1)
  {
    std::unordered_map<std::uint64_t, std::uint32_t> local;
#pragma omp for schedule(static)
    for (int d = 0; d < n; ++d) {
      const auto& ids = doc_tokens[d];
      for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) ++local[pair_key(ids[i], ids[j])];
      }
    }
#pragma omp critical(cooc_merge)
    for (const auto& [key, count] : local) codoc_[key] += count;
  }
}

std::optional<std::uint32_t> CoocStats::lookup(const Token& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool CoocStats::contains(const Token& token) const { return lookup(token).has_value(); }

std::uint32_t CoocStats::doc_freq(const Token& token) const {
  const auto index = lookup(token);
  return index ? doc_freq_[*index] : 0;
}

std::uint32_t CoocStats::codoc_freq(const Token& a, const Token& b) const {
  const auto ia = lookup(a);
  const auto ib = lookup(b);
  if (!ia || !ib) return 0;
  if (*ia == *ib) return doc_freq_[*ia];
  const auto it = codoc_.find(pair_key(*ia, *ib));
  return it == codoc_.end() ? 0 : it->second;
}

std::span<const CoocStats::Posting> CoocStats::postings(const Token& token) const {
  const auto index = lookup(token);
  if (!index) return {};
  return postings_[*index];
}

double CoocStats::tfidf(const Token& token, std::size_t document) const {
  const auto list = postings(token);
  const auto it = std::lower_bound(
      list.begin(), list.end(), document,
      [](const Posting& p, std::size_t d) { return p.document < d; });
  if (it == list.end() || it->document != document) return 0.0;
  return it->tfidf;
}

double TokenProbabilities::p(const Token& token) const {
  return static_cast<double>(stats_->doc_freq(token)) / stats_->n_docs();
}

double TokenProbabilities::p(const Token& a, const Token& b) const {
  return static_cast<double>(stats_->codoc_freq(a, b)) / stats_->n_docs();
}

TokenProbabilities estimate_pw(const CoocStats& stats) { return TokenProbabilities(stats); }

std::map<std::string, RawDocument> load_sidecar(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open sidecar " + path.string());
  std::map<std::string, RawDocument> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw DataError(path.string() + ": line " + std::to_string(line_number) +
                      ": record needs a string 'id'");
    }
    RawDocument doc;
    doc.id = j["id"].get<std::string>();
    doc.title = j.value("title", "");
    doc.author = j.value("author", "");
    doc.collection = j.value("collection", "");
    doc.text = j.value("text", "");
    if (j.contains("tags") && j["tags"].is_array()) {
      for (const auto& tag : j["tags"]) {
        if (tag.is_string()) doc.tags.push_back(tag.get<std::string>());
      }
    }
    out[doc.id] = std::move(doc);
  }
  return out;
}

}  // namespace topicmap
