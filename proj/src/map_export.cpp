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

#include "topicmap/map_export.hpp"

#include <algorithm>
#include <set>

#include "topicmap/common.hpp"

namespace topicmap {

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& token : tokens) out.push_back(token.surface);
  return out;
}

nlohmann::json doc_json(const DocRef& doc) {
  return {{"id", doc.id}, {"title", doc.title}, {"collection_id", doc.collection_id},
          {"weight", doc.weight}};
}

DocRef doc_from_json(const nlohmann::json& json) {
  return DocRef{json.at("id").get<std::string>(), json.at("title").get<std::string>(),
                json.at("collection_id").get<std::string>(), json.at("weight").get<double>()};
}

}  // namespace

nlohmann::json MapExport::to_json() const {
  nlohmann::json out;
  out["levels"] = nlohmann::json::array();
  for (const auto& level : levels) {
    out["levels"].push_back({{"level", level.level}, {"topic_ids", level.topic_ids}});
  }
  out["topics"] = nlohmann::json::object();
  for (const auto& [id, topic] : topics) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& doc : topic.top_documents) docs.push_back(doc_json(doc));
    out["topics"][id] = {
        {"id", topic.id},
        {"level", topic.level},
        {"top_words_3", topic.top_words_3},
        {"top_words_10", topic.top_words_10},
        {"top_tags_3", topic.top_tags_3},
        {"children", topic.children},
        {"spectre_rank", topic.spectre_rank ? nlohmann::json(*topic.spectre_rank) : nlohmann::json(nullptr)},
        {"top_documents", docs},
        {"document_count", topic.document_count},
    };
  }
  out["documents"] = nlohmann::json::object();
  for (const auto& [id, docs] : documents) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& doc : docs) list.push_back(doc_json(doc));
    out["documents"][id] = list;
  }
  return out;
}

MapExport MapExport::from_json(const nlohmann::json& json) {
  MapExport map;
  try {
    for (const auto& level : json.at("levels")) {
      map.levels.push_back(MapLevel{level.at("level").get<std::size_t>(),
                                    level.at("topic_ids").get<std::vector<std::string>>()});
    }
    for (const auto& [id, entry] : json.at("topics").items()) {
      MapTopic topic;
      topic.id = entry.at("id").get<std::string>();
      topic.level = entry.at("level").get<std::size_t>();
      topic.top_words_3 = entry.at("top_words_3").get<std::vector<std::string>>();
      topic.top_words_10 = entry.at("top_words_10").get<std::vector<std::string>>();
      topic.top_tags_3 = entry.at("top_tags_3").get<std::vector<std::string>>();
      topic.children = entry.at("children").get<std::vector<std::string>>();
      if (!entry.at("spectre_rank").is_null()) {
        topic.spectre_rank = entry.at("spectre_rank").get<std::size_t>();
      }
      for (const auto& doc : entry.at("top_documents")) topic.top_documents.push_back(doc_from_json(doc));
      topic.document_count = entry.at("document_count").get<std::size_t>();
      map.topics.emplace(id, std::move(topic));
    }
    for (const auto& [id, list] : json.at("documents").items()) {
      auto& docs = map.documents[id];
      for (const auto& doc : list) docs.push_back(doc_from_json(doc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("map.json: ") + e.what());
  }
  return map;
}

std::string MapExport::dump() const { return to_json().dump(2) + "\n"; }

MapExport export_map(const Hierarchy& hierarchy, const Spectre& spectre, const CorpusSet& corpus,
                     std::size_t docs_per_topic, const std::map<std::string, RawDocument>* sidecar) {
  if (hierarchy.levels.empty()) throw ArgumentError("export_map: empty hierarchy");
  const TopicModel& top = hierarchy.levels.front();
  std::vector<std::size_t> sorted = spectre.order;
  std::sort(sorted.begin(), sorted.end());
  bool permutation = sorted.size() == top.n_topics();
  for (std::size_t i = 0; permutation && i < sorted.size(); ++i) permutation = sorted[i] == i;
  if (!permutation) {
    throw ArgumentError("export_map: spectre is not a permutation of the top-level topics");
  }

  MapExport map;
  std::map<std::string, std::vector<const Edge*>> children;
  for (const auto& edge : hierarchy.edges) children[edge.parent].push_back(&edge);

  for (std::size_t l = 0; l < hierarchy.levels.size(); ++l) {
    const TopicModel& model = hierarchy.levels[l];
    MapLevel level{l + 1, {}};
    if (l == 0) {
      for (std::size_t index : spectre.order) level.topic_ids.push_back(model.topic_ids[index]);
    } else {
      level.topic_ids = model.topic_ids;
    }
    map.levels.push_back(level);

    std::vector<std::vector<DocRef>> attached(model.n_topics());
    for (std::size_t d = 0; d < model.document_ids.size(); ++d) {
      const std::string& doc_id = model.document_ids[d];
      const auto index = corpus.document_index(doc_id);
      if (!index) throw DataError("export_map: document '" + doc_id + "' is not in the corpus");
      const Document& doc = corpus.document(*index);
      std::string title = doc.title.value_or(doc_id);
      if (sidecar != nullptr) {
        const auto it = sidecar->find(doc_id);
        if (it != sidecar->end() && !it->second.title.empty()) title = it->second.title;
      }
      const auto column = static_cast<Eigen::Index>(d);
      std::vector<double> weights(model.n_topics());
      for (std::size_t t = 0; t < model.n_topics(); ++t) {
        weights[t] = model.theta(static_cast<Eigen::Index>(t), column);
      }
      std::vector<double> ranked = weights;
      std::sort(ranked.begin(), ranked.end(), std::greater<>());
      const double cut = ranked[std::min(kAttachTopTopics, ranked.size()) - 1];
      for (std::size_t t = 0; t < model.n_topics(); ++t) {
        if (weights[t] > 0.0 && weights[t] >= cut) {
          attached[t].push_back(DocRef{doc_id, title, doc.collection_id, weights[t]});
        }
      }
    }

    for (std::size_t t = 0; t < model.n_topics(); ++t) {
      const std::string& id = model.topic_ids[t];
      auto& docs = attached[t];
      std::sort(docs.begin(), docs.end(), [](const DocRef& a, const DocRef& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.id < b.id;
      });
      MapTopic topic;
      topic.id = id;
      topic.level = l + 1;
      topic.top_words_3 = surfaces(top_tokens(model, t, 3, Modality::kWord));
      topic.top_words_10 = surfaces(top_tokens(model, t, 10, Modality::kWord));
      topic.top_tags_3 = surfaces(top_tokens(model, t, 3, Modality::kTag));
      auto edges = children[id];
      std::sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) {
        if (a->weight != b->weight) return a->weight > b->weight;
        return a->child < b->child;
      });
      for (const Edge* edge : edges) topic.children.push_back(edge->child);
      topic.document_count = docs.size();
      topic.top_documents.assign(docs.begin(),
                                 docs.begin() + static_cast<std::ptrdiff_t>(std::min(docs_per_topic, docs.size())));
      map.topics.emplace(id, std::move(topic));
      map.documents.emplace(id, std::move(docs));
    }
  }
  for (std::size_t rank = 0; rank < spectre.order.size(); ++rank) {
    map.topics.at(top.topic_ids[spectre.order[rank]]).spectre_rank = rank;
  }
  return map;
}

std::vector<DocRef> paginate_topic_docs(const MapExport& map, const std::string& topic_id,
                                        std::size_t offset, std::size_t limit) {
  const auto it = map.documents.find(topic_id);
  if (it == map.documents.end()) throw ArgumentError("unknown topic '" + topic_id + "'");
  const auto& docs = it->second;
  if (offset >= docs.size()) return {};
  const std::size_t end = std::min(docs.size(), offset + std::min(limit, docs.size() - offset));
  return {docs.begin() + static_cast<std::ptrdiff_t>(offset), docs.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace topicmap
