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

#include "topicmap/spectre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "topicmap/common.hpp"
#include "topicmap/edge_quality.hpp"

namespace topicmap {

std::string spectre_metric_name(SpectreMetric metric) {
  return metric == SpectreMetric::kHellinger ? "hellinger" : "jensen_shannon";
}

SpectreMetric parse_spectre_metric(const std::string& name) {
  if (name == "hellinger") return SpectreMetric::kHellinger;
  if (name == "jensen_shannon") return SpectreMetric::kJensenShannon;
  throw ArgumentError("unknown spectre metric '" + name + "' (hellinger | jensen_shannon)");
}

SpectreMode parse_spectre_mode(const std::string& name) {
  if (name == "exact") return SpectreMode::kExact;
  if (name == "heuristic") return SpectreMode::kHeuristic;
  throw ArgumentError("unknown spectre mode '" + name + "' (exact | heuristic)");
}

void DistanceMatrix::validate() const {
  if (values.rows() != values.cols()) throw ArgumentError("distance matrix is not square");
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (values(i, i) != 0.0) throw ArgumentError("distance matrix has a nonzero diagonal");
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (!(values(i, j) >= 0.0) || !std::isfinite(values(i, j))) {
        throw ArgumentError("distance matrix has a negative or non-finite entry");
      }
      if (values(i, j) != values(j, i)) throw ArgumentError("distance matrix is not symmetric");
    }
  }
}

namespace {

double jensen_shannon_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double divergence = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) divergence += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) divergence += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::sqrt(std::clamp(divergence, 0.0, 1.0));
}

std::vector<std::size_t> nearest_neighbour(const DistanceMatrix& dist, std::size_t start) {
  const std::size_t n = dist.size();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> order{start};
  used[start] = true;
  while (order.size() < n) {
    const std::size_t from = order.back();
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (best == n || dist.values(from, j) < dist.values(from, best)) best = j;
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

// First-improvement 2-opt on an open path: reverse order[i..j].
void two_opt(const DistanceMatrix& dist, std::vector<std::size_t>& order) {
  const std::size_t n = order.size();
  const auto& d = dist.values;
  constexpr double kMinGain = 1e-12;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n && !improved; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double before = 0.0;
        double after = 0.0;
        if (i > 0) {
          before += d(order[i - 1], order[i]);
          after += d(order[i - 1], order[j]);
        }
        if (j + 1 < n) {
          before += d(order[j], order[j + 1]);
          after += d(order[i], order[j + 1]);
        }
        if (after < before - kMinGain) {
          std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i),
                       order.begin() + static_cast<std::ptrdiff_t>(j + 1));
          improved = true;
          break;
        }
      }
    }
  }
}

void canonicalize(std::vector<std::size_t>& order) {
  if (order.size() > 1 && order.front() > order.back()) std::reverse(order.begin(), order.end());
}

// Depth-first search in lexicographic order with prefix pruning. Partial
// sums are accumulated in path order, so they equal path_weight prefixes.
// Only the orientation with first < last is accepted.
struct ExactSearch {
  const Eigen::MatrixXd& d;
  std::size_t n;
  std::vector<std::size_t> current;
  std::vector<bool> used;
  std::vector<std::size_t> best;
  double best_weight = std::numeric_limits<double>::infinity();

  void visit(double partial) {
    if (current.size() == n) {
      if (current.front() < current.back() && partial < best_weight) {
        best_weight = partial;
        best = current;
      }
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double next = current.empty() ? 0.0 : partial + d(current.back(), j);
      if (next >= best_weight) continue;
      used[j] = true;
      current.push_back(j);
      visit(next);
      current.pop_back();
      used[j] = false;
    }
  }
};

}  // namespace

DistanceMatrix topic_distances(const TopicModel& model, SpectreMetric metric) {
  const std::size_t n = model.n_topics();
  if (n == 0) throw ArgumentError("topic_distances: model has no topics");
  std::vector<std::vector<double>> columns;
  for (std::size_t t = 0; t < n; ++t) columns.push_back(phi_column(model, t));
  DistanceMatrix dist{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = metric == SpectreMetric::kHellinger
                               ? hellinger_distance(columns[i], columns[j])
                               : jensen_shannon_distance(columns[i], columns[j]);
      dist.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
      dist.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
    }
  }
  return dist;
}

double path_weight(const DistanceMatrix& dist, const std::vector<std::size_t>& order) {
  double weight = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    weight += dist.values(static_cast<Eigen::Index>(order[i - 1]),
                          static_cast<Eigen::Index>(order[i]));
  }
  return weight;
}

Spectre solve_spectre(const DistanceMatrix& dist, SpectreMode mode, int threads) {
  dist.validate();
  const std::size_t n = dist.size();
  if (n == 0) throw ArgumentError("solve_spectre: empty distance matrix");
  if (n == 1) return Spectre{{0}, 0.0};

  if (mode == SpectreMode::kExact) {
    if (n > kMaxExactSpectreTopics) {
      throw ArgumentError("exact spectre supports at most " +
                          std::to_string(kMaxExactSpectreTopics) + " topics (got " +
                          std::to_string(n) + "); use the heuristic mode");
    }
    ExactSearch search{dist.values, n, {}, std::vector<bool>(n, false), {}};
    search.visit(0.0);
    return Spectre{search.best, path_weight(dist, search.best)};
  }

  std::vector<std::vector<std::size_t>> candidates(n);
  std::vector<double> weights(n);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
  for (std::size_t start = 0; start < n; ++start) {
    auto order = nearest_neighbour(dist, start);
    two_opt(dist, order);
    canonicalize(order);
    weights[start] = path_weight(dist, order);
    candidates[start] = std::move(order);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    if (weights[s] < weights[best] ||
        (weights[s] == weights[best] && candidates[s] < candidates[best])) {
      best = s;
    }
  }
  return Spectre{candidates[best], weights[best]};
}

nlohmann::json spectre_to_json(const Spectre& spectre, const TopicModel& model,
                               SpectreMetric metric) {
  nlohmann::json order = nlohmann::json::array();
  for (std::size_t index : spectre.order) order.push_back(model.topic_ids.at(index));
  return {{"metric", spectre_metric_name(metric)}, {"order", order}, {"weight", spectre.weight}};
}

}  // namespace topicmap
