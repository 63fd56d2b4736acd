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

// Linear spectre: a minimum-weight Hamiltonian path through the topics of
// one level, used to order the top-level tiles of the map.

#ifndef TOPICMAP_SPECTRE_HPP_
#define TOPICMAP_SPECTRE_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "topicmap/artm.hpp"
#include "topicmap/common.hpp"

namespace topicmap {

enum class SpectreMetric { kHellinger, kJensenShannon };
enum class SpectreMode { kExact, kHeuristic };

std::string spectre_metric_name(SpectreMetric metric);
SpectreMetric parse_spectre_metric(const std::string& name);
SpectreMode parse_spectre_mode(const std::string& name);

inline constexpr std::size_t kMaxExactSpectreTopics = 10;

struct DistanceMatrix {
  Eigen::MatrixXd values;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  // Throws ArgumentError unless square, symmetric, nonnegative, zero diagonal.
  void validate() const;
};

struct Spectre {
  std::vector<std::size_t> order;
  double weight = 0.0;
};

// Pairwise distances between phi columns. Hellinger is bounded by 1; the
// Jensen-Shannon variant is the square root of the base-2 divergence.
DistanceMatrix topic_distances(const TopicModel& model, SpectreMetric metric);

// Sum of consecutive distances along `order`, accumulated left to right.
double path_weight(const DistanceMatrix& dist, const std::vector<std::size_t>& order);

// Exact: the lexicographically smallest optimal order among those whose
// first index is below their last. Heuristic: nearest neighbour from every start, each
// improved by 2-opt segment reversal; best weight wins, ties to the smaller
// order. Exact mode rejects more than kMaxExactSpectreTopics topics.
Spectre solve_spectre(const DistanceMatrix& dist, SpectreMode mode, int threads = 0);

// {metric, order: [topic ids], weight}
nlohmann::json spectre_to_json(const Spectre& spectre, const TopicModel& model,
                               SpectreMetric metric);

}  // namespace topicmap

#endif  // TOPICMAP_SPECTRE_HPP_
