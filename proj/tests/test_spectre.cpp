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
#include <limits>
#include <numeric>

#include "doctest.h"
#include "topicmap/spectre.hpp"

using namespace topicmap;

namespace {

DistanceMatrix random_matrix(std::size_t n, Rng& rng) {
  DistanceMatrix dist;
  dist.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < dist.values.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < dist.values.cols(); ++j) {
      dist.values(i, j) = dist.values(j, i) = rng.uniform();
    }
  }
  return dist;
}

double brute_force_weight(const DistanceMatrix& dist) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, path_weight(dist, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

double nearest_neighbour_weight(const DistanceMatrix& dist, std::size_t start) {
  std::vector<bool> used(dist.size(), false);
  std::vector<std::size_t> order = {start};
  used[start] = true;
  while (order.size() < dist.size()) {
    std::size_t next = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const double d = dist.values(static_cast<Eigen::Index>(order.back()), static_cast<Eigen::Index>(j));
      if (!used[j] && d < best) {
        best = d;
        next = j;
      }
    }
    used[next] = true;
    order.push_back(next);
  }
  return path_weight(dist, order);
}

bool is_permutation_of(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> expected(n);
  std::iota(expected.begin(), expected.end(), 0);
  return sorted == expected;
}

TopicModel two_column_model(const std::vector<std::vector<double>>& columns) {
  TopicModel model;
  const std::size_t rows = columns[0].size();
  for (std::size_t w = 0; w < rows; ++w) model.tokens.push_back(Token{"w" + std::to_string(w), Modality::kWord});
  model.phi = PhiMatrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t t = 0; t < columns.size(); ++t) {
    model.topic_ids.push_back("t" + std::to_string(t));
    for (std::size_t w = 0; w < rows; ++w) model.phi(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(t)) = columns[t][w];
  }
  model.reindex();
  return model;
}

}  // namespace

TEST_CASE("a single topic is its own spectre") {
  DistanceMatrix dist;
  dist.values = Eigen::MatrixXd::Zero(1, 1);
  for (SpectreMode mode : {SpectreMode::kExact, SpectreMode::kHeuristic}) {
    const Spectre s = solve_spectre(dist, mode);
    CHECK(s.order == std::vector<std::size_t>{0});
    CHECK(s.weight == 0.0);
  }
}

TEST_CASE("three topics with a cheap chain") {
  DistanceMatrix dist;
  dist.values = Eigen::MatrixXd(3, 3);
  dist.values << 0, 1, 5, 1, 0, 2, 5, 2, 0;
  for (SpectreMode mode : {SpectreMode::kExact, SpectreMode::kHeuristic}) {
    const Spectre s = solve_spectre(dist, mode);
    CHECK(s.order == std::vector<std::size_t>{0, 1, 2});
    CHECK(s.weight == 3.0);
  }
}

TEST_CASE("equal distances give the canonical order") {
  DistanceMatrix dist;
  dist.values = Eigen::MatrixXd::Constant(5, 5, 0.3);
  dist.values.diagonal().setZero();
  const Spectre s = solve_spectre(dist, SpectreMode::kExact);
  CHECK(s.order == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(s.weight == doctest::Approx(1.2));
}

TEST_CASE("exact solver matches brute force") {
  Rng rng(11);
  for (std::size_t n = 2; n <= 7; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const DistanceMatrix dist = random_matrix(n, rng);
      const Spectre s = solve_spectre(dist, SpectreMode::kExact);
      CHECK(is_permutation_of(s.order, n));
      CHECK(s.order.front() < s.order.back());
      CHECK(s.weight == doctest::Approx(brute_force_weight(dist)).epsilon(1e-12));
      CHECK(s.weight == path_weight(dist, s.order));
      std::vector<std::size_t> reversed(s.order.rbegin(), s.order.rend());
      CHECK(path_weight(dist, reversed) == doctest::Approx(s.weight).epsilon(1e-12));
    }
  }
}

TEST_CASE("a constant shift keeps the optimal order") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const DistanceMatrix dist = random_matrix(6, rng);
    DistanceMatrix shifted = dist;
    shifted.values.array() += 0.75;
    shifted.values.diagonal().setZero();
    const Spectre a = solve_spectre(dist, SpectreMode::kExact);
    const Spectre b = solve_spectre(shifted, SpectreMode::kExact);
    CHECK(a.order == b.order);
    CHECK(b.weight == doctest::Approx(a.weight + 5 * 0.75).epsilon(1e-12));
  }
}

TEST_CASE("heuristic improves on nearest neighbour and is deterministic") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const DistanceMatrix dist = random_matrix(12, rng);
    const Spectre h = solve_spectre(dist, SpectreMode::kHeuristic, 1);
    CHECK(is_permutation_of(h.order, 12));
    CHECK(h.order.front() < h.order.back());
    for (std::size_t start = 0; start < 12; ++start) {
      CHECK(h.weight <= nearest_neighbour_weight(dist, start) + 1e-12);
    }
    const Spectre again = solve_spectre(dist, SpectreMode::kHeuristic, 4);
    CHECK(again.order == h.order);
    CHECK(again.weight == h.weight);
  }
}

TEST_CASE("exact mode is limited to small levels") {
  Rng rng(14);
  const DistanceMatrix dist = random_matrix(kMaxExactSpectreTopics + 1, rng);
  CHECK_THROWS_WITH_AS(solve_spectre(dist, SpectreMode::kExact), doctest::Contains("heuristic"),
                       ArgumentError);
  CHECK_NOTHROW(solve_spectre(random_matrix(kMaxExactSpectreTopics, rng), SpectreMode::kExact));
}

TEST_CASE("distance matrices are validated") {
  DistanceMatrix dist;
  dist.values = Eigen::MatrixXd(2, 2);
  dist.values << 0, 1, 2, 0;
  CHECK_THROWS_AS(dist.validate(), ArgumentError);
  dist.values << 0, -1, -1, 0;
  CHECK_THROWS_AS(dist.validate(), ArgumentError);
  dist.values << 1, 1, 1, 0;
  CHECK_THROWS_AS(dist.validate(), ArgumentError);
  dist.values = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(solve_spectre(dist, SpectreMode::kHeuristic), ArgumentError);
}

TEST_CASE("topic distances between phi columns") {
  const TopicModel model = two_column_model({{0.5, 0.5}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}});
  const DistanceMatrix h = topic_distances(model, SpectreMetric::kHellinger);
  CHECK_NOTHROW(h.validate());
  CHECK(h.values(0, 3) == 0.0);
  CHECK(h.values(1, 2) == doctest::Approx(1.0));
  CHECK(h.values(0, 1) == doctest::Approx(0.5412).epsilon(1e-4));
  const DistanceMatrix js = topic_distances(model, SpectreMetric::kJensenShannon);
  CHECK_NOTHROW(js.validate());
  CHECK(js.values(1, 2) == doctest::Approx(1.0));
  CHECK(js.values(0, 3) == doctest::Approx(0.0));

  const Spectre s = solve_spectre(h, SpectreMode::kExact);
  const auto json = spectre_to_json(s, model, SpectreMetric::kHellinger);
  CHECK(json["metric"] == "hellinger");
  CHECK(json["order"].size() == 4);
  CHECK(json["weight"].get<double>() == doctest::Approx(s.weight));
}

TEST_CASE("metric and mode names parse") {
  CHECK(parse_spectre_metric("hellinger") == SpectreMetric::kHellinger);
  CHECK(parse_spectre_metric("jensen_shannon") == SpectreMetric::kJensenShannon);
  CHECK(spectre_metric_name(SpectreMetric::kJensenShannon) == "jensen_shannon");
  CHECK(parse_spectre_mode("exact") == SpectreMode::kExact);
  CHECK_THROWS_AS(parse_spectre_metric("cosine"), ArgumentError);
  CHECK_THROWS_AS(parse_spectre_mode("fast"), ArgumentError);
}
