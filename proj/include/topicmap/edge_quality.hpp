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

// Parent-child edge measures. Extrinsic: EmbedSim and CoocSim over the
// cross pairs of the two topics' top word tokens. Intrinsic: HellingerSim
// and KLSim between the two phi columns.

#ifndef TOPICMAP_EDGE_QUALITY_HPP_
#define TOPICMAP_EDGE_QUALITY_HPP_

#include <span>
#include <string>
#include <vector>

#include "topicmap/artm.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/edge_scores.hpp"
#include "topicmap/embeddings.hpp"
#include "topicmap/hierarchy.hpp"

namespace topicmap {

inline constexpr double kKlSmoothing = 1e-12;

// (1/C) sum over cross pairs with w_a != w_t of <v(w_a), v(w_t)>; pairs
// lacking an embedding are skipped. NaN (with a warning) if C == 0.
double embed_sim(const std::vector<Token>& parent_top, const std::vector<Token>& child_top,
                 const EmbeddingStore& embeds);
// (1/C) sum over cross pairs with w_a != w_t of ln((d(w_a, w_t) + eps) / d(w_t)).
double cooc_sim(const std::vector<Token>& parent_top, const std::vector<Token>& child_top,
                const CoocStats& cooc, double epsilon = 1.0);

// On aligned distributions of equal length.
double hellinger_distance(std::span<const double> p, std::span<const double> q);
double hellinger_sim(std::span<const double> p, std::span<const double> q);
// -KL(p || q) after mixing both with `smoothing` uniform mass.
double kl_sim(std::span<const double> p, std::span<const double> q,
              double smoothing = kKlSmoothing);

struct AlignedColumns {
  std::vector<Token> tokens;
  std::vector<double> parent;
  std::vector<double> child;
};

// Expresses both phi columns over the union of the two models' tokens;
// tokens missing from a model get zero mass.
AlignedColumns align_columns(const TopicModel& parent_model, std::size_t parent,
                             const TopicModel& child_model, std::size_t child);

struct EdgeResources {
  const EmbeddingStore* embeds = nullptr;
  const CoocStats* cooc = nullptr;
  std::size_t n_top = 10;
  double cooc_epsilon = 1.0;
  double kl_smoothing = kKlSmoothing;
  int threads = 0;
};

double edge_measure(const std::string& measure, const TopicModel& parent_model,
                    std::size_t parent, const TopicModel& child_model, std::size_t child,
                    const EdgeResources& resources);

// One row per candidate (parent, child) pair of every adjacent level pair,
// in level, parent, child order.
EdgeScoreTable score_all(const Hierarchy& hierarchy, const std::vector<std::string>& measures,
                         const EdgeResources& resources);

}  // namespace topicmap

#endif  // TOPICMAP_EDGE_QUALITY_HPP_
