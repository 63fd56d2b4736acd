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

// The serialized topic map: levels in spectre order, per-topic labels and
// children, and weight-ordered document lists for every topic.

#ifndef TOPICMAP_MAP_EXPORT_HPP_
#define TOPICMAP_MAP_EXPORT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "topicmap/common.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/hierarchy.hpp"
#include "topicmap/spectre.hpp"

namespace topicmap {

inline constexpr std::size_t kAttachTopTopics = 3;

struct DocRef {
  std::string id;
  std::string title;
  std::string collection_id;
  double weight = 0.0;  // p(t|d)

  bool operator==(const DocRef&) const = default;
};

struct MapTopic {
  std::string id;
  std::size_t level = 1;  // 1-based
  std::vector<std::string> top_words_3;
  std::vector<std::string> top_words_10;
  std::vector<std::string> top_tags_3;
  std::vector<std::string> children;
  std::optional<std::size_t> spectre_rank;  // top level only
  std::vector<DocRef> top_documents;
  std::size_t document_count = 0;
};

struct MapLevel {
  std::size_t level = 1;
  // Top level in spectre order, deeper levels in model order.
  std::vector<std::string> topic_ids;
};

struct MapExport {
  std::vector<MapLevel> levels;
  std::map<std::string, MapTopic> topics;
  // Every attached document of every topic, weight descending, ties by id.
  std::map<std::string, std::vector<DocRef>> documents;

  nlohmann::json to_json() const;
  static MapExport from_json(const nlohmann::json& json);
  // Sorted keys, two-space indent, trailing newline.
  std::string dump() const;
};

// Document d is attached to topic t of a level when theta_td > 0 and t is
// among the top kAttachTopTopics topics of d (ties at the cut included).
// Children follow the hierarchy's edges ordered by weight descending.
MapExport export_map(const Hierarchy& hierarchy, const Spectre& spectre, const CorpusSet& corpus,
                     std::size_t docs_per_topic,
                     const std::map<std::string, RawDocument>* sidecar = nullptr);

// Empty past the end; ArgumentError for an unknown topic.
std::vector<DocRef> paginate_topic_docs(const MapExport& map, const std::string& topic_id,
                                        std::size_t offset, std::size_t limit);

}  // namespace topicmap

#endif  // TOPICMAP_MAP_EXPORT_HPP_
