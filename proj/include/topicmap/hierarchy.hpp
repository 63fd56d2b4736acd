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

// Multi-level hierarchies: each level is a flat model; neighbouring levels
// are linked by Psi = [p(child | parent)], estimated so that parent topics
// are mixtures of child topics.

#ifndef TOPICMAP_HIERARCHY_HPP_
#define TOPICMAP_HIERARCHY_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topicmap/artm.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/edge_scores.hpp"

namespace topicmap {

// child topics x parent topics; columns are distributions.
struct PsiMatrix {
  Eigen::MatrixXd values;
  std::size_t parent_level = 0;
  std::size_t child_level = 1;
  std::vector<std::string> parent_ids;
  std::vector<std::string> child_ids;
};

// Per-parent-column min-max rescaling of Psi to [0, 1].
struct NormalizedPsi {
  Eigen::MatrixXd values;
  std::size_t parent_level = 0;
  std::size_t child_level = 1;
  std::vector<std::string> parent_ids;
  std::vector<std::string> child_ids;
  std::vector<std::size_t> degenerate_columns;
};

struct Edge {
  std::string parent;
  std::string child;
  double weight = 0.0;

  auto operator<=>(const Edge&) const = default;
};

struct Hierarchy {
  std::vector<TopicModel> levels;
  std::vector<PsiMatrix> psis;
  std::vector<NormalizedPsi> normalized;
  std::vector<Edge> edges;

  // (level, topic index) of a topic id, searching every level.
  std::optional<std::pair<std::size_t, std::size_t>> locate(const std::string& topic_id) const;
  // Normalized weight of a candidate edge, NaN when the pair is not adjacent.
  double normalized_weight(const std::string& parent, const std::string& child) const;
};

struct FitLevelResult {
  TopicModel child;
  PsiMatrix psi;
  TrainReport report;
  // sum over parents and tokens of |phi_parent - phi_child * psi|.
  double reconstruction_error = 0.0;
};

// Trains the next level on `corpus` together with one pseudo-document per
// parent topic (its phi column, scaled to psi_weight times the mean document
// length). The pseudo-documents' theta columns form Psi.
FitLevelResult fit_level(const TopicModel& parent, std::size_t n_child_topics,
                         const CorpusSet& corpus, const TrainConfig& config,
                         double psi_weight = 1.0, std::size_t parent_level = 0);

double reconstruction_error(const TopicModel& parent, const TopicModel& child,
                            const Eigen::MatrixXd& psi);

NormalizedPsi normalize_psi(const PsiMatrix& psi);

// Pairs with normalized weight strictly greater than k.
std::vector<Edge> edges_above(const NormalizedPsi& norm, double k);

// The k best candidate edges of `scores` by `measure`; ties by (parent,
// child). When k >= number of children every child keeps at least one
// parent: an orphan's best edge replaces the lowest-ranked retained edge
// whose child has a spare parent. Edge weights are taken from `hierarchy`
// when given.
std::vector<Edge> top_k_edges(const EdgeScoreTable& scores, const std::string& measure,
                              std::size_t k, const Hierarchy* hierarchy = nullptr);

struct HierarchyConfig {
  // Topics per level, strictly increasing.
  std::vector<std::size_t> level_topics{5, 12};
  TrainConfig train;
  double psi_weight = 1.0;
  double edge_threshold = 0.5;

  void validate() const;
};

struct HierarchyBuild {
  Hierarchy hierarchy;
  CorpusSet corpus;
  // |D_train| after each meta-algorithm iteration (heterogeneous only).
  std::vector<std::size_t> train_sizes;
  std::vector<TrainReport> reports;
};

// Builds the deeper levels, Psi matrices and thresholded edges on top of a
// trained first level.
Hierarchy extend_hierarchy(TopicModel top, const CorpusSet& corpus, const HierarchyConfig& config,
                           std::vector<TrainReport>* reports = nullptr);

HierarchyBuild build_concat(std::vector<Collection> collections, const HierarchyConfig& config);

struct HeterogeneousConfig {
  double batch_fraction = 0.1;
  // Defaults to enough iterations to exhaust the pool.
  std::optional<std::size_t> iterations;
};

HierarchyBuild build_heterogeneous(Collection base, std::vector<Collection> new_collections,
                                   const HeterogeneousConfig& hetero,
                                   const HierarchyConfig& config);

std::string level_topic_prefix(std::size_t level);

}  // namespace topicmap

#endif  // TOPICMAP_HIERARCHY_HPP_
