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

// On-disk layout of models and hierarchies.
//
//   model dir:      phi.tsv, theta.tsv, meta.json
//   hierarchy dir:  level_<l>/ (model dirs), psi_<l>.tsv, edges.json,
//                   hierarchy.json, corpus/<collection>.bow

#ifndef TOPICMAP_MODEL_IO_HPP_
#define TOPICMAP_MODEL_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "topicmap/artm.hpp"
#include "topicmap/common.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/edge_scores.hpp"
#include "topicmap/hierarchy.hpp"

namespace topicmap {

struct ModelMeta {
  std::vector<std::string> collection_ids;
  nlohmann::json config = nlohmann::json::object();
};

void save_model(const TopicModel& model, const std::filesystem::path& dir,
                const ModelMeta& meta = {});
TopicModel load_model(const std::filesystem::path& dir, ModelMeta* meta = nullptr);

struct HierarchyMeta {
  std::vector<std::string> collection_ids;
  nlohmann::json config = nlohmann::json::object();
};

// Edge scores, when given, are attached to the matching entries of edges.json.
void save_hierarchy(const Hierarchy& hierarchy, const std::filesystem::path& dir,
                    const HierarchyMeta& meta = {}, const EdgeScoreTable* scores = nullptr);
// Normalized Psi is recomputed from the stored Psi.
Hierarchy load_hierarchy(const std::filesystem::path& dir, HierarchyMeta* meta = nullptr);

// One <collection id>.bow file per collection under `dir`.
void save_corpus(const CorpusSet& corpus, const std::filesystem::path& dir);
CorpusSet load_corpus(const std::filesystem::path& dir,
                      const std::vector<std::string>& collection_ids);

std::filesystem::path level_dir(const std::filesystem::path& hierarchy_dir, std::size_t level);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace topicmap

#endif  // TOPICMAP_MODEL_IO_HPP_
