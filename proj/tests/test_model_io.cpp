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

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "topicmap/edge_quality.hpp"
#include "topicmap/model_io.hpp"

using namespace topicmap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

HierarchyBuild small_build() {
  synthetic::GeneratorConfig generator;
  generator.topics = {0, 1, 2};
  HierarchyConfig config;
  config.level_topics = {2, 4};
  config.train.seed = 3;
  return build_concat({synthetic::sample_collection(generator, 30, "s", 8)}, config);
}

}  // namespace

TEST_CASE("models round-trip at twelve significant digits") {
  const HierarchyBuild build = small_build();
  const TopicModel& model = build.hierarchy.levels[0];
  TempDir dir("topicmap_test_model");
  ModelMeta meta;
  meta.collection_ids = {"s"};
  meta.config = {{"n_topics", 2}};
  save_model(model, dir.path, meta);
  CHECK(fs::exists(dir.path / "phi.tsv"));
  CHECK(fs::exists(dir.path / "theta.tsv"));
  CHECK(fs::exists(dir.path / "meta.json"));

  ModelMeta loaded_meta;
  const TopicModel loaded = load_model(dir.path, &loaded_meta);
  CHECK(loaded.tokens == model.tokens);
  CHECK(loaded.topic_ids == model.topic_ids);
  CHECK(loaded.document_ids == model.document_ids);
  CHECK(loaded.seed == model.seed);
  CHECK(loaded.modality_weights == model.modality_weights);
  CHECK((loaded.phi - model.phi).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK((loaded.theta - model.theta).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK(loaded_meta.collection_ids == meta.collection_ids);
  CHECK(loaded_meta.config == meta.config);

  const std::string header = read_text_file(dir.path / "phi.tsv").substr(0, 6);
  CHECK(header == "token\t");
}

TEST_CASE("damaged model files are rejected") {
  const HierarchyBuild build = small_build();
  TempDir dir("topicmap_test_damaged");
  save_model(build.hierarchy.levels[0], dir.path);
  write_text_file(dir.path / "phi.tsv", "token\ttopic_a\nword:x\tnotanumber\n");
  CHECK_THROWS_AS(load_model(dir.path), DataError);
  CHECK_THROWS_AS(load_model(dir.path / "missing"), DataError);
  write_text_file(dir.path / "bad.json", "{");
  CHECK_THROWS_AS(read_json_file(dir.path / "bad.json"), DataError);
}

TEST_CASE("hierarchies round-trip with their edges and scores") {
  const HierarchyBuild build = small_build();
  EdgeResources resources;
  const EdgeScoreTable scores = score_all(build.hierarchy, {measure::kHellingerSim}, resources);
  TempDir dir("topicmap_test_hierarchy");
  HierarchyMeta meta;
  meta.collection_ids = {"s"};
  save_hierarchy(build.hierarchy, dir.path, meta, &scores);
  CHECK(fs::exists(level_dir(dir.path, 0) / "phi.tsv"));
  CHECK(fs::exists(level_dir(dir.path, 1) / "phi.tsv"));
  CHECK(fs::exists(dir.path / "psi_1.tsv"));
  CHECK(fs::exists(dir.path / "hierarchy.json"));

  const auto edges = read_json_file(dir.path / "edges.json");
  REQUIRE(edges.size() == build.hierarchy.edges.size());
  if (!edges.empty()) CHECK(edges[0]["scores"].contains(measure::kHellingerSim));

  HierarchyMeta loaded_meta;
  const Hierarchy loaded = load_hierarchy(dir.path, &loaded_meta);
  CHECK(loaded_meta.collection_ids == meta.collection_ids);
  REQUIRE(loaded.levels.size() == 2);
  CHECK(loaded.edges.size() == build.hierarchy.edges.size());
  for (std::size_t i = 0; i < loaded.edges.size(); ++i) {
    CHECK(loaded.edges[i].parent == build.hierarchy.edges[i].parent);
    CHECK(loaded.edges[i].child == build.hierarchy.edges[i].child);
    CHECK(loaded.edges[i].weight == doctest::Approx(build.hierarchy.edges[i].weight).epsilon(1e-10));
  }
  CHECK((loaded.psis[0].values - build.hierarchy.psis[0].values).cwiseAbs().maxCoeff() <= 1e-11);
  CHECK((loaded.normalized[0].values - build.hierarchy.normalized[0].values).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("edges naming unknown topics are rejected on load") {
  const HierarchyBuild build = small_build();
  TempDir dir("topicmap_test_bad_edges");
  save_hierarchy(build.hierarchy, dir.path);
  write_text_file(dir.path / "edges.json", R"([{"parent": "nope", "child": "nada", "weight": 1.0}])");
  CHECK_THROWS_AS(load_hierarchy(dir.path), DataError);
}

TEST_CASE("corpora round-trip by collection") {
  std::istringstream one("d1 |@word a:2 |@tag x\n");
  std::istringstream two("d2 b c\n");
  const CorpusSet corpus = merge({ingest_stream(one, "one"), ingest_stream(two, "two")});
  TempDir dir("topicmap_test_corpus");
  save_corpus(corpus, dir.path);
  CHECK(fs::exists(dir.path / "one.bow"));
  const CorpusSet back = load_corpus(dir.path, {"one", "two"});
  CHECK(back.tokens() == corpus.tokens());
  CHECK(back.num_documents() == 2);
  CHECK(back.document(0).counts == corpus.document(0).counts);
  CHECK(back.document(1).collection_id == "two");
}
