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

// Hierarchy-level quality: averaging of edge scores over thresholded
// normalized Psi, ranking agreement between measure-ranked and Psi-ranked
// edges, assessor vote aggregation, and ROC-AUC of a measure as a
// classifier of good edges.

#ifndef TOPICMAP_HIER_QUALITY_HPP_
#define TOPICMAP_HIER_QUALITY_HPP_

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "topicmap/edge_scores.hpp"
#include "topicmap/hierarchy.hpp"

namespace topicmap {

// Mean of `measure` over edges with normalized weight > k; NaN (with a
// warning) when no edge passes.
double avg_quality(const EdgeScoreTable& scores, const NormalizedPsi& norm,
                   const std::string& measure, double k);

std::vector<double> default_threshold_grid();  // 0.00, 0.01, ..., 0.99

std::vector<std::pair<double, double>> avg_quality_curve(const EdgeScoreTable& scores,
                                                         const NormalizedPsi& norm,
                                                         const std::string& measure,
                                                         const std::vector<double>& grid);

struct EdgeKey {
  std::string parent;
  std::string child;
  auto operator<=>(const EdgeKey&) const = default;
};

struct RequestResponse {
  std::vector<EdgeKey> request;   // top-k by measure
  std::vector<EdgeKey> response;  // top-k by normalized Psi
};

// Ties in either ranking are broken by (parent, child).
RequestResponse rank_request_response(const EdgeScoreTable& scores, const std::string& measure,
                                      const NormalizedPsi& norm, std::size_t k);

// The relevant set is the first k request items.
// AP: mean of precision@i over relevant positions i of the response,
// normalized by the number of relevant items found (0 if none).
double average_precision_at_k(const std::vector<EdgeKey>& request,
                              const std::vector<EdgeKey>& response, std::size_t k);
// Binary gains, 1/log2(i + 1) discount, divided by the ideal DCG.
double ndcg_at_k(const std::vector<EdgeKey>& request, const std::vector<EdgeKey>& response,
                 std::size_t k);
// Pairs of items present in both lists that the response orders opposite
// to the request.
std::size_t defect_pairs_at_k(const std::vector<EdgeKey>& request,
                              const std::vector<EdgeKey>& response, std::size_t k);
// 1 / (1 + defect pairs).
double inverse_dp_at_k(const std::vector<EdgeKey>& request, const std::vector<EdgeKey>& response,
                       std::size_t k);

struct RankingPoint {
  std::size_t k = 0;
  double average_precision = 0.0;
  double ndcg = 0.0;
  double inverse_dp = 0.0;
};

// Ranking metrics for k = 1 .. k_max (capped at the candidate count).
std::vector<RankingPoint> ranking_curve(const EdgeScoreTable& scores, const std::string& measure,
                                        const NormalizedPsi& norm, std::size_t k_max);

// The k maximizing InverseDP over k_min..; ties go to the largest k.
std::size_t best_inverse_dp_k(const std::vector<RankingPoint>& curve, std::size_t k_min = 1);

enum class Vote { kRelated, kUnrelated };

struct VoteRow {
  std::string parent;
  std::string child;
  std::vector<Vote> votes;
};

struct AssessorVotes {
  std::vector<VoteRow> rows;

  // CSV `parent,child,vote`, one vote per line; optional header.
  static AssessorVotes read_csv(std::istream& input);
};

struct LabeledEdge {
  std::string parent;
  std::string child;
  int label = -1;
  std::size_t related = 0;
  std::size_t total = 0;
};

struct VoteAggregation {
  std::vector<LabeledEdge> edges;
  // agreement size (votes on the majority side) -> number of edges
  std::map<std::size_t, std::size_t> agreement_histogram;
};

// +1 iff at least ceil(0.8 * votes) assessors voted "related".
VoteAggregation aggregate_votes(const AssessorVotes& votes);

// CSV `parent,child,label` with label in {1,-1}; optional header.
std::vector<LabeledEdge> read_labels_csv(std::istream& input);
void write_labels_csv(const std::vector<LabeledEdge>& labels, std::ostream& output);

// Probability that a random positive outranks a random negative, ties
// counted as 1/2. Throws ArgumentError unless both classes are present.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace topicmap

#endif  // TOPICMAP_HIER_QUALITY_HPP_
