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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "topicmap/hierarchy.hpp"

using namespace topicmap;

namespace {

Token word(const std::string& s) { return Token{s, Modality::kWord}; }

Collection parse(const std::string& text, const std::string& id = "c") {
  std::istringstream input(text);
  return ingest_stream(input, id);
}

PsiMatrix psi_of(const Eigen::MatrixXd& values) {
  PsiMatrix psi;
  psi.values = values;
  for (Eigen::Index a = 0; a < values.cols(); ++a) psi.parent_ids.push_back("a" + std::to_string(a));
  for (Eigen::Index t = 0; t < values.rows(); ++t) psi.child_ids.push_back("t" + std::to_string(t));
  return psi;
}

bool same_bits(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

// Six tokens, three disjoint child topics of two tokens each.
const char* kThreeBlocks =
    "d1 w0:50 w1:50\nd2 w0:40 w1:40\nd3 w2:50 w3:50\nd4 w2:30 w3:30\nd5 w4:50 w5:50\nd6 w4:20 w5:20\n";

TopicModel parent_model(const std::vector<std::array<double, 3>>& mixtures) {
  TopicModel parent;
  for (int w = 0; w < 6; ++w) parent.tokens.push_back(word("w" + std::to_string(w)));
  parent.phi = PhiMatrix::Zero(6, static_cast<Eigen::Index>(mixtures.size()));
  for (std::size_t a = 0; a < mixtures.size(); ++a) {
    parent.topic_ids.push_back("p" + std::to_string(a));
    for (int w = 0; w < 6; ++w) parent.phi(w, static_cast<Eigen::Index>(a)) = 0.5 * mixtures[a][w / 2];
  }
  parent.reindex();
  return parent;
}

std::size_t block_of(const TopicModel& child, Eigen::Index t) {
  Eigen::Index best = 0;
  child.phi.col(t).maxCoeff(&best);
  const std::string surface = child.tokens[static_cast<std::size_t>(best)].surface;
  return static_cast<std::size_t>((surface[1] - '0') / 2);
}

EdgeScoreTable score_table(const std::vector<std::tuple<std::string, std::string, double>>& rows) {
  EdgeScoreTable table;
  table.measures = {measure::kEmbedSim};
  for (const auto& [parent, child, value] : rows) {
    table.rows.push_back(EdgeScoreRow{parent, child, {{measure::kEmbedSim, value}}, std::nullopt});
  }
  return table;
}

}  // namespace

TEST_CASE("normalize_psi rescales each parent column to [0, 1]") {
  Eigen::MatrixXd values(3, 2);
  values << 0.2, 0.1, 0.5, 0.9, 0.8, 0.0;
  const NormalizedPsi norm = normalize_psi(psi_of(values));
  CHECK(norm.values(0, 0) == doctest::Approx(0.0));
  CHECK(norm.values(1, 0) == doctest::Approx(0.5));
  CHECK(norm.values(2, 0) == doctest::Approx(1.0));
  CHECK(norm.values(1, 1) == doctest::Approx(1.0));
  CHECK(norm.values(2, 1) == doctest::Approx(0.0));
  CHECK(norm.degenerate_columns.empty());

  Eigen::MatrixXd two(2, 1);
  two << 0.1, 0.9;
  const NormalizedPsi simple = normalize_psi(psi_of(two));
  CHECK(simple.values(0, 0) == 0.0);
  CHECK(simple.values(1, 0) == 1.0);
}

TEST_CASE("a constant Psi column normalizes to zeros with a warning") {
  Eigen::MatrixXd values(2, 1);
  values << 0.5, 0.5;
  WarningCapture warnings;
  const NormalizedPsi norm = normalize_psi(psi_of(values));
  CHECK(norm.values.isZero());
  CHECK(norm.degenerate_columns == std::vector<std::size_t>{0});
  CHECK(warnings.contains("normalize_psi: constant column"));
  CHECK(edges_above(norm, 0.0).empty());
}

TEST_CASE("normalize_psi is idempotent on normalized columns") {
  Eigen::MatrixXd values(4, 2);
  values << 0.1, 0.3, 0.2, 0.3, 0.3, 0.1, 0.4, 0.3;
  const NormalizedPsi once = normalize_psi(psi_of(values));
  const NormalizedPsi twice = normalize_psi(psi_of(once.values));
  CHECK(once.values.isApprox(twice.values, 1e-15));
}

TEST_CASE("edges_above keeps weights strictly above the threshold") {
  Eigen::MatrixXd values(3, 1);
  values << 0.2, 0.5, 0.8;
  const NormalizedPsi norm = normalize_psi(psi_of(values));
  const auto edges = edges_above(norm, 0.4);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].parent == "a0");
  CHECK(std::set<std::string>{edges[0].child, edges[1].child} == std::set<std::string>{"t1", "t2"});
  CHECK(edges_above(norm, 1.0).empty());
  CHECK(edges_above(norm, -1.0).size() == 3);
  CHECK(edges_above(norm, 0.5).size() == 1);
}

TEST_CASE("edges_above is monotone in the threshold") {
  Rng rng(3);
  Eigen::MatrixXd values(6, 4);
  for (Eigen::Index i = 0; i < values.size(); ++i) values.data()[i] = rng.uniform();
  const NormalizedPsi norm = normalize_psi(psi_of(values));
  for (double lo = 0.0; lo < 1.0; lo += 0.1) {
    const auto loose = edges_above(norm, lo);
    const auto tight = edges_above(norm, lo + 0.05);
    const std::set<Edge> loose_set(loose.begin(), loose.end());
    for (const Edge& e : tight) CHECK(loose_set.count(e) == 1);
    for (const Edge& e : loose) {
      CHECK(e.weight > lo);
      CHECK(e.weight >= 0.0);
      CHECK(e.weight <= 1.0);
    }
  }
}

TEST_CASE("top_k_edges takes the best scores with deterministic ties") {
  WarningCapture warnings;
  const EdgeScoreTable table = score_table({{"a", "t1", 0.9},
                                            {"a", "t2", 0.8},
                                            {"b", "t1", 0.3},
                                            {"b", "t2", 0.2},
                                            {"b", "t3", 0.1}});
  const auto top2 = top_k_edges(table, measure::kEmbedSim, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].child == "t1");
  CHECK(top2[1].child == "t2");
  CHECK(top_k_edges(table, measure::kEmbedSim, 99).size() == 5);
  CHECK_THROWS_AS(top_k_edges(table, measure::kEmbedSim, 0), ArgumentError);
  CHECK_THROWS_AS(top_k_edges(table, "nonsense", 1), ArgumentError);

  const EdgeScoreTable tied = score_table({{"b", "t1", 0.5}, {"a", "t2", 0.5}, {"a", "t1", 0.5}});
  const auto one = top_k_edges(tied, measure::kEmbedSim, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].parent == "a");
  CHECK(one[0].child == "t1");
}

TEST_CASE("top_k_edges keeps every child when k covers the children") {
  // t3 would be orphaned by a plain top-3 cut.
  const EdgeScoreTable table = score_table({{"a", "t1", 0.9},
                                            {"b", "t1", 0.85},
                                            {"a", "t2", 0.8},
                                            {"b", "t2", 0.3},
                                            {"b", "t3", 0.1}});
  const auto edges = top_k_edges(table, measure::kEmbedSim, 3);
  REQUIRE(edges.size() == 3);
  std::set<std::string> children;
  for (const Edge& e : edges) children.insert(e.child);
  CHECK(children == std::set<std::string>{"t1", "t2", "t3"});
  // The dropped edge is the lowest retained one whose child had a spare parent.
  CHECK(std::none_of(edges.begin(), edges.end(),
                     [](const Edge& e) { return e.parent == "b" && e.child == "t1"; }));

  WarningCapture warnings;
  CHECK(top_k_edges(table, measure::kEmbedSim, 2).size() == 2);
  CHECK(warnings.contains("below the number of child topics"));
}

TEST_CASE("fit_level recovers a known mixture") {
  const CorpusSet corpus = merge({parse(kThreeBlocks)});
  const TopicModel parent = parent_model({{0.3, 0.7, 0.0}, {0.0, 0.6, 0.4}});
  TrainConfig config;
  config.max_iterations = 2000;
  config.ll_rel_tolerance = 1e-14;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    config.seed = seed;
    const FitLevelResult fit = fit_level(parent, 3, corpus, config);
    std::array<std::size_t, 3> child_of_block{};
    for (Eigen::Index t = 0; t < 3; ++t) child_of_block[block_of(fit.child, t)] = static_cast<std::size_t>(t);
    const double expected[2][3] = {{0.3, 0.7, 0.0}, {0.0, 0.6, 0.4}};
    for (Eigen::Index a = 0; a < 2; ++a) {
      double l1 = 0.0;
      for (std::size_t b = 0; b < 3; ++b) {
        l1 += std::abs(fit.psi.values(static_cast<Eigen::Index>(child_of_block[b]), a) - expected[a][b]);
      }
      CHECK(l1 < 0.05);
      CHECK(std::abs(fit.psi.values.col(a).sum() - 1.0) < 1e-9);
    }
    CHECK(fit.reconstruction_error < 1e-3);
    CHECK(fit.psi.parent_ids == parent.topic_ids);
    CHECK(fit.psi.child_ids == fit.child.topic_ids);
  }
}

TEST_CASE("fit_level with an identity factorization has zero reconstruction error") {
  const double a[3] = {1.0, 0.0, 0.0};
  const double b[3] = {0.0, 1.0, 0.0};
  const TopicModel parent = parent_model({{a[0], a[1], a[2]}, {b[0], b[1], b[2]}});
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(2, 2);
  psi(0, 1) = 1.0;
  psi(1, 0) = 1.0;
  TopicModel child = parent;
  child.phi.col(0).swap(child.phi.col(1));
  CHECK(reconstruction_error(parent, child, psi) == 0.0);
}

TEST_CASE("fit_level warns when the child level is not larger") {
  const CorpusSet corpus = merge({parse(kThreeBlocks)});
  const TopicModel parent = parent_model({{0.3, 0.7, 0.0}, {0.0, 0.6, 0.4}});
  WarningCapture warnings;
  TrainConfig config;
  const FitLevelResult fit = fit_level(parent, 2, corpus, config);
  CHECK(warnings.contains("fit_level: child level has"));
  CHECK(fit.psi.values.rows() == 2);

  TopicModel broken = parent;
  broken.topic_ids.pop_back();
  CHECK_THROWS_AS(fit_level(broken, 3, corpus, config), DataError);
}

TEST_CASE("concat on one collection equals plain training") {
  synthetic::GeneratorConfig generator;
  generator.topics = {0, 1, 2};
  const Collection collection = synthetic::sample_collection(generator, 40, "only", 4);
  HierarchyConfig config;
  config.level_topics = {3, 6};
  config.train.seed = 9;
  const HierarchyBuild build = build_concat({collection}, config);
  TrainConfig direct = config.train;
  direct.n_topics = 3;
  direct.topic_prefix = level_topic_prefix(0);
  const TrainResult trained = train(merge({collection}), direct);
  CHECK(same_bits(build.hierarchy.levels[0].phi, trained.model.phi));
  CHECK(same_bits(build.hierarchy.levels[0].theta, trained.model.theta));
  REQUIRE(build.hierarchy.levels.size() == 2);
  REQUIRE(build.hierarchy.psis.size() == 1);
  CHECK(build.hierarchy.psis[0].values.rows() == 6);
  CHECK(build.hierarchy.psis[0].values.cols() == 3);
  for (const Edge& e : build.hierarchy.edges) {
    CHECK(e.weight > config.edge_threshold);
    CHECK(build.hierarchy.locate(e.parent)->first == 0);
    CHECK(build.hierarchy.locate(e.child)->first == 1);
    CHECK(build.hierarchy.normalized_weight(e.parent, e.child) == e.weight);
  }
  CHECK(std::isnan(build.hierarchy.normalized_weight("nope", "nada")));
}

TEST_CASE("concat of disjoint vocabularies uses their union") {
  HierarchyConfig config;
  config.level_topics = {2, 3};
  const HierarchyBuild build =
      build_concat({parse("d1 a b\nd2 a\n", "one"), parse("e1 x y\ne2 y\n", "two")}, config);
  CHECK(build.hierarchy.levels[0].tokens.size() == 4);
  CHECK_THROWS_AS(build_concat({}, config), ArgumentError);
}

TEST_CASE("hierarchy configuration is validated") {
  HierarchyConfig config;
  config.level_topics = {5, 5};
  CHECK_THROWS_AS(config.validate(), ArgumentError);
  config.level_topics = {};
  CHECK_THROWS_AS(config.validate(), ArgumentError);
}

TEST_CASE("heterogeneous without new collections equals the base-only build") {
  synthetic::GeneratorConfig generator;
  generator.topics = {0, 1, 2};
  const Collection base = synthetic::sample_collection(generator, 40, "base", 6);
  HierarchyConfig config;
  config.level_topics = {3, 5};
  WarningCapture warnings;
  const HierarchyBuild hetero = build_heterogeneous(base, {}, HeterogeneousConfig{}, config);
  CHECK(warnings.contains("no new documents"));
  const HierarchyBuild concat = build_concat({base}, config);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(same_bits(hetero.hierarchy.levels[l].phi, concat.hierarchy.levels[l].phi));
  }
  CHECK(hetero.hierarchy.edges == concat.hierarchy.edges);
}

TEST_CASE("heterogeneous grows the training set monotonically and adds each document once") {
  synthetic::GeneratorConfig generator;
  generator.topics = {0, 1};
  const Collection base = synthetic::sample_collection(generator, 20, "base", 1);
  generator.topics = {2, 3};
  const Collection extra = synthetic::sample_collection(generator, 23, "extra", 2);
  HierarchyConfig config;
  config.level_topics = {2, 4};
  HeterogeneousConfig hetero;
  hetero.batch_fraction = 0.25;
  const HierarchyBuild build = build_heterogeneous(base, {extra}, hetero, config);
  // ceil(0.25 * 23) = 6 per batch; four batches exhaust the pool.
  CHECK(build.train_sizes == std::vector<std::size_t>{20, 26, 32, 38, 43});
  CHECK(build.corpus.num_documents() == 43);
  const auto ids = build.corpus.document_ids();
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  CHECK(build.hierarchy.levels[0].theta.cols() == 43);

  hetero.iterations = 2;
  const HierarchyBuild partial = build_heterogeneous(base, {extra}, hetero, config);
  CHECK(partial.train_sizes.back() == 32);

  const HierarchyBuild again = build_heterogeneous(base, {extra}, hetero, config);
  CHECK(same_bits(partial.hierarchy.levels[1].phi, again.hierarchy.levels[1].phi));

  hetero.batch_fraction = 0.0;
  CHECK_THROWS_AS(build_heterogeneous(base, {extra}, hetero, config), ArgumentError);
}

TEST_CASE("full-batch heterogeneous trains on the concatenation") {
  synthetic::GeneratorConfig generator;
  generator.topics = {0, 1};
  const Collection base = synthetic::sample_collection(generator, 15, "base", 3);
  const Collection extra = synthetic::sample_collection(generator, 10, "extra", 4);
  HierarchyConfig config;
  config.level_topics = {2, 3};
  HeterogeneousConfig hetero;
  hetero.batch_fraction = 1.0;
  const HierarchyBuild build = build_heterogeneous(base, {extra}, hetero, config);
  CHECK(build.train_sizes == std::vector<std::size_t>{15, 25});
}
