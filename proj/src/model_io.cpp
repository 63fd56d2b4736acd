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

#include "topicmap/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "topicmap/common.hpp"

namespace topicmap {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().pop_back();
  }
  return fields;
}

// Header "<corner>\t<col ids...>", then "<row id>\t<values...>".
struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<double>> values;
};

Table read_table(const fs::path& path) {
  std::istringstream input(read_text_file(path));
  Table table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (line_number == 1) {
      table.columns.assign(fields.begin() + 1, fields.end());
      continue;
    }
    if (fields.size() != table.columns.size() + 1) {
      throw DataError(path.string() + ":" + std::to_string(line_number) + ": expected " +
                      std::to_string(table.columns.size() + 1) + " fields");
    }
    table.rows.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        row.push_back(parse_real(fields[i]));
      } catch (const Error&) {
        throw DataError(path.string() + ":" + std::to_string(line_number) + ": bad number '" +
                        fields[i] + "'");
      }
    }
    table.values.push_back(std::move(row));
  }
  if (line_number == 0) throw DataError(path.string() + ": empty table");
  return table;
}

template <typename Matrix>
void write_table(std::ostream& out, const std::string& corner,
                 const std::vector<std::string>& columns, const std::vector<std::string>& rows,
                 const Matrix& values) {
  out << corner;
  for (const auto& column : columns) out << '\t' << column;
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << '\t' << format_real(values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out << '\n';
  }
}

nlohmann::json weights_json(const ModalityWeights& weights) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [modality, weight] : weights) out[std::string(modality_name(modality))] = weight;
  return out;
}

}  // namespace

void write_text_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << contents;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nlohmann::json read_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_model(const TopicModel& model, const fs::path& dir, const ModelMeta& meta) {
  fs::create_directories(dir);
  std::vector<std::string> token_keys;
  for (const auto& token : model.tokens) token_keys.push_back(token.key());

  std::ostringstream phi;
  write_table(phi, "token", model.topic_ids, token_keys, model.phi);
  write_text_file(dir / "phi.tsv", phi.str());

  std::ostringstream theta;
  write_table(theta, "topic", model.document_ids, model.topic_ids, model.theta);
  write_text_file(dir / "theta.tsv", theta.str());

  nlohmann::json info = {{"seed", model.seed},
                         {"modality_weights", weights_json(model.modality_weights)},
                         {"collection_ids", meta.collection_ids},
                         {"config", meta.config},
                         {"n_topics", model.n_topics()},
                         {"n_tokens", model.tokens.size()},
                         {"n_documents", model.document_ids.size()}};
  write_text_file(dir / "meta.json", info.dump(2) + "\n");
}

TopicModel load_model(const fs::path& dir, ModelMeta* meta) {
  const Table phi = read_table(dir / "phi.tsv");
  const Table theta = read_table(dir / "theta.tsv");
  const nlohmann::json info = read_json_file(dir / "meta.json");

  TopicModel model;
  model.topic_ids = phi.columns;
  if (theta.rows != phi.columns) {
    throw DataError(dir.string() + ": theta.tsv topics do not match phi.tsv");
  }
  const auto n_topics = static_cast<Eigen::Index>(phi.columns.size());
  model.phi.resize(static_cast<Eigen::Index>(phi.rows.size()), n_topics);
  for (std::size_t r = 0; r < phi.rows.size(); ++r) {
    try {
      model.tokens.push_back(Token::from_key(phi.rows[r]));
    } catch (const Error& e) {
      throw DataError(dir.string() + "/phi.tsv: " + e.what());
    }
    for (Eigen::Index t = 0; t < n_topics; ++t) {
      model.phi(static_cast<Eigen::Index>(r), t) = phi.values[r][static_cast<std::size_t>(t)];
    }
  }
  model.document_ids = theta.columns;
  model.theta.resize(n_topics, static_cast<Eigen::Index>(theta.columns.size()));
  for (Eigen::Index t = 0; t < n_topics; ++t) {
    for (std::size_t d = 0; d < theta.columns.size(); ++d) {
      model.theta(t, static_cast<Eigen::Index>(d)) = theta.values[static_cast<std::size_t>(t)][d];
    }
  }
  try {
    model.seed = info.at("seed").get<std::uint64_t>();
    model.modality_weights.clear();
    for (const auto& [name, weight] : info.at("modality_weights").items()) {
      model.modality_weights[parse_modality(name)] = weight.get<double>();
    }
    if (meta != nullptr) {
      meta->collection_ids = info.value("collection_ids", std::vector<std::string>{});
      meta->config = info.value("config", nlohmann::json::object());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir.string() + "/meta.json: " + e.what());
  }
  model.reindex();
  return model;
}

fs::path level_dir(const fs::path& hierarchy_dir, std::size_t level) {
  return hierarchy_dir / ("level_" + std::to_string(level + 1));
}

void save_hierarchy(const Hierarchy& hierarchy, const fs::path& dir, const HierarchyMeta& meta,
                    const EdgeScoreTable* scores) {
  fs::create_directories(dir);
  for (std::size_t l = 0; l < hierarchy.levels.size(); ++l) {
    save_model(hierarchy.levels[l], level_dir(dir, l), {meta.collection_ids, meta.config});
  }
  for (const auto& psi : hierarchy.psis) {
    std::ostringstream out;
    write_table(out, "child", psi.parent_ids, psi.child_ids, psi.values);
    write_text_file(dir / ("psi_" + std::to_string(psi.parent_level + 1) + ".tsv"), out.str());
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& edge : hierarchy.edges) {
    nlohmann::json entry = {{"parent", edge.parent}, {"child", edge.child}, {"weight", edge.weight}};
    nlohmann::json edge_scores = nlohmann::json::object();
    if (scores != nullptr) {
      if (const auto* row = scores->find(edge.parent, edge.child)) {
        for (const auto& [measure, value] : row->scores) {
          edge_scores[measure] = std::isnan(value) ? nlohmann::json(nullptr) : nlohmann::json(value);
        }
      }
    }
    entry["scores"] = edge_scores;
    edges.push_back(entry);
  }
  write_text_file(dir / "edges.json", edges.dump(2) + "\n");
  nlohmann::json info = {{"levels", hierarchy.levels.size()},
                         {"collection_ids", meta.collection_ids},
                         {"config", meta.config}};
  write_text_file(dir / "hierarchy.json", info.dump(2) + "\n");
}

Hierarchy load_hierarchy(const fs::path& dir, HierarchyMeta* meta) {
  const nlohmann::json info = read_json_file(dir / "hierarchy.json");
  Hierarchy hierarchy;
  std::size_t n_levels = 0;
  try {
    n_levels = info.at("levels").get<std::size_t>();
    if (meta != nullptr) {
      meta->collection_ids = info.value("collection_ids", std::vector<std::string>{});
      meta->config = info.value("config", nlohmann::json::object());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir.string() + "/hierarchy.json: " + e.what());
  }
  if (n_levels == 0) throw DataError(dir.string() + ": hierarchy has no levels");
  for (std::size_t l = 0; l < n_levels; ++l) hierarchy.levels.push_back(load_model(level_dir(dir, l)));

  for (std::size_t l = 0; l + 1 < n_levels; ++l) {
    const Table table = read_table(dir / ("psi_" + std::to_string(l + 1) + ".tsv"));
    PsiMatrix psi;
    psi.parent_level = l;
    psi.child_level = l + 1;
    psi.parent_ids = table.columns;
    psi.child_ids = table.rows;
    if (psi.parent_ids != hierarchy.levels[l].topic_ids ||
        psi.child_ids != hierarchy.levels[l + 1].topic_ids) {
      throw DataError(dir.string() + ": psi_" + std::to_string(l + 1) +
                      ".tsv does not match the level topics");
    }
    psi.values.resize(static_cast<Eigen::Index>(table.rows.size()),
                      static_cast<Eigen::Index>(table.columns.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        psi.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = table.values[r][c];
      }
    }
    hierarchy.normalized.push_back(normalize_psi(psi));
    hierarchy.psis.push_back(std::move(psi));
  }

  const nlohmann::json edges = read_json_file(dir / "edges.json");
  try {
    for (const auto& entry : edges) {
      Edge edge{entry.at("parent").get<std::string>(), entry.at("child").get<std::string>(),
                entry.at("weight").get<double>()};
      const auto parent = hierarchy.locate(edge.parent);
      const auto child = hierarchy.locate(edge.child);
      if (!parent || !child || child->first != parent->first + 1) {
        throw DataError(dir.string() + "/edges.json: edge " + edge.parent + " -> " + edge.child +
                        " does not join adjacent levels");
      }
      hierarchy.edges.push_back(std::move(edge));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(dir.string() + "/edges.json: " + e.what());
  }
  return hierarchy;
}

void save_corpus(const CorpusSet& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& collection : corpus.collections()) {
    std::ostringstream out;
    write_collection(collection, out);
    write_text_file(dir / (collection.id + ".bow"), out.str());
  }
}

CorpusSet load_corpus(const fs::path& dir, const std::vector<std::string>& collection_ids) {
  std::vector<Collection> collections;
  for (const auto& id : collection_ids) collections.push_back(ingest(dir / (id + ".bow"), id));
  return merge(std::move(collections));
}

}  // namespace topicmap
