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

#include "topicmap/hier_quality.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace topicmap {

namespace {

using ScoreLookup = std::map<std::pair<std::string, std::string>, double>;

ScoreLookup lookup_for(const EdgeScoreTable& scores, const std::string& measure) {
  if (!scores.has_measure(measure)) {
    throw ArgumentError("unknown measure '" + measure + "' for this score table");
  }
  ScoreLookup lookup;
  for (const auto& row : scores.rows) {
    const auto it = row.scores.find(measure);
    if (it != row.scores.end()) lookup[{row.parent, row.child}] = it->second;
  }
  return lookup;
}

double average_over(const ScoreLookup& lookup, const NormalizedPsi& norm, double k) {
  double sum = 0.0;
  std::size_t count = 0;
  for (Eigen::Index a = 0; a < norm.values.cols(); ++a) {
    for (Eigen::Index t = 0; t < norm.values.rows(); ++t) {
      if (!(norm.values(t, a) > k)) continue;
      const auto it = lookup.find({norm.parent_ids.at(a), norm.child_ids.at(t)});
      if (it == lookup.end()) {
        throw ArgumentError("score table does not cover edge " + norm.parent_ids.at(a) + " -> " +
                            norm.child_ids.at(t));
      }
      if (std::isnan(it->second)) continue;
      sum += it->second;
      ++count;
    }
  }
  if (count == 0) return kNaN;
  return sum / static_cast<double>(count);
}

std::vector<EdgeKey> window(const std::vector<EdgeKey>& items, std::size_t k) {
  return {items.begin(), items.begin() + static_cast<std::ptrdiff_t>(std::min(k, items.size()))};
}

// Counts inversions of `values` by merge sort.
std::size_t count_inversions(std::vector<std::size_t>& values, std::size_t lo, std::size_t hi,
                             std::vector<std::size_t>& scratch) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t count = count_inversions(values, lo, mid, scratch) +
                      count_inversions(values, mid, hi, scratch);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t out = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      count += mid - i;
      scratch[out++] = values[j++];
    } else {
      scratch[out++] = values[i++];
    }
  }
  while (i < mid) scratch[out++] = values[i++];
  while (j < hi) scratch[out++] = values[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            values.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

void check_k(std::size_t k) {
  if (k == 0) throw ArgumentError("ranking metrics need k >= 1");
}

}  // namespace

double avg_quality(const EdgeScoreTable& scores, const NormalizedPsi& norm,
                   const std::string& measure, double k) {
  const double value = average_over(lookup_for(scores, measure), norm, k);
  if (std::isnan(value)) warn("avg_quality: no edge above threshold " + std::to_string(k));
  return value;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(i / 100.0);
  return grid;
}

std::vector<std::pair<double, double>> avg_quality_curve(const EdgeScoreTable& scores,
                                                         const NormalizedPsi& norm,
                                                         const std::string& measure,
                                                         const std::vector<double>& grid) {
  const ScoreLookup lookup = lookup_for(scores, measure);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (double k : grid) curve.emplace_back(k, average_over(lookup, norm, k));
  std::stable_sort(curve.begin(), curve.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  return curve;
}

RequestResponse rank_request_response(const EdgeScoreTable& scores, const std::string& measure,
                                      const NormalizedPsi& norm, std::size_t k) {
  check_k(k);
  const ScoreLookup lookup = lookup_for(scores, measure);
  struct Candidate {
    EdgeKey key;
    double score;
    double weight;
  };
  std::vector<Candidate> candidates;
  for (Eigen::Index a = 0; a < norm.values.cols(); ++a) {
    for (Eigen::Index t = 0; t < norm.values.rows(); ++t) {
      EdgeKey key{norm.parent_ids.at(a), norm.child_ids.at(t)};
      const auto it = lookup.find({key.parent, key.child});
      const double score = it == lookup.end() ? kNaN : it->second;
      candidates.push_back({std::move(key), score, norm.values(t, a)});
    }
  }
  if (k > candidates.size()) {
    throw ArgumentError("k = " + std::to_string(k) + " exceeds the " +
                        std::to_string(candidates.size()) + " candidate edges");
  }
  const auto descending = [](double x, double y, const EdgeKey& kx, const EdgeKey& ky) {
    const bool xn = std::isnan(x);
    const bool yn = std::isnan(y);
    if (xn != yn) return yn;
    if (!xn && x != y) return x > y;
    return kx < ky;
  };
  RequestResponse out;
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    return descending(x.score, y.score, x.key, y.key);
  });
  for (std::size_t i = 0; i < k; ++i) out.request.push_back(candidates[i].key);
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    return descending(x.weight, y.weight, x.key, y.key);
  });
  for (std::size_t i = 0; i < k; ++i) out.response.push_back(candidates[i].key);
  return out;
}

double average_precision_at_k(const std::vector<EdgeKey>& request,
                              const std::vector<EdgeKey>& response, std::size_t k) {
  check_k(k);
  const auto relevant_list = window(request, k);
  const std::set<EdgeKey> relevant(relevant_list.begin(), relevant_list.end());
  const auto ranked = window(response, k);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (relevant.count(ranked[i]) == 0) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

double ndcg_at_k(const std::vector<EdgeKey>& request, const std::vector<EdgeKey>& response,
                 std::size_t k) {
  check_k(k);
  const auto relevant_list = window(request, k);
  const std::set<EdgeKey> relevant(relevant_list.begin(), relevant_list.end());
  const auto ranked = window(response, k);
  double dcg = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (relevant.count(ranked[i]) == 0) continue;
    ++hits;
    dcg += 1.0 / std::log2(static_cast<double>(i + 2));
  }
  if (hits == 0) return 0.0;
  double ideal = 0.0;
  for (std::size_t i = 0; i < hits; ++i) ideal += 1.0 / std::log2(static_cast<double>(i + 2));
  return dcg / ideal;
}

std::size_t defect_pairs_at_k(const std::vector<EdgeKey>& request,
                              const std::vector<EdgeKey>& response, std::size_t k) {
  check_k(k);
  std::map<EdgeKey, std::size_t> request_rank;
  const auto requested = window(request, k);
  for (std::size_t i = 0; i < requested.size(); ++i) request_rank.emplace(requested[i], i);
  std::vector<std::size_t> ranks;
  for (const auto& key : window(response, k)) {
    const auto it = request_rank.find(key);
    if (it != request_rank.end()) ranks.push_back(it->second);
  }
  std::vector<std::size_t> scratch(ranks.size());
  return count_inversions(ranks, 0, ranks.size(), scratch);
}

double inverse_dp_at_k(const std::vector<EdgeKey>& request, const std::vector<EdgeKey>& response,
                       std::size_t k) {
  return 1.0 / (1.0 + static_cast<double>(defect_pairs_at_k(request, response, k)));
}

std::vector<RankingPoint> ranking_curve(const EdgeScoreTable& scores, const std::string& measure,
                                        const NormalizedPsi& norm, std::size_t k_max) {
  const auto candidates = static_cast<std::size_t>(norm.values.size());
  const std::size_t limit = std::min(k_max, candidates);
  std::vector<RankingPoint> curve;
  if (limit == 0) return curve;
  // Both rankings are prefixes of the full orderings, so rank once.
  const RequestResponse full = rank_request_response(scores, measure, norm, limit);
  for (std::size_t k = 1; k <= limit; ++k) {
    curve.push_back(RankingPoint{k, average_precision_at_k(full.request, full.response, k),
                                 ndcg_at_k(full.request, full.response, k),
                                 inverse_dp_at_k(full.request, full.response, k)});
  }
  return curve;
}

std::size_t best_inverse_dp_k(const std::vector<RankingPoint>& curve, std::size_t k_min) {
  std::size_t best_k = 0;
  double best = -1.0;
  for (const auto& point : curve) {
    if (point.k < k_min) continue;
    if (point.inverse_dp >= best) {
      best = point.inverse_dp;
      best_k = point.k;
    }
  }
  if (best_k == 0) throw ArgumentError("best_inverse_dp_k: no k in range");
  return best_k;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  return fields;
}

}  // namespace

AssessorVotes AssessorVotes::read_csv(std::istream& input) {
  AssessorVotes votes;
  std::map<std::pair<std::string, std::string>, std::size_t> position;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    if (line_number == 1 && fields.size() == 3 && fields[0] == "parent") continue;
    if (fields.size() != 3) {
      throw DataError("votes line " + std::to_string(line_number) + ": expected parent,child,vote");
    }
    Vote vote;
    if (fields[2] == "related") {
      vote = Vote::kRelated;
    } else if (fields[2] == "unrelated") {
      vote = Vote::kUnrelated;
    } else {
      throw DataError("votes line " + std::to_string(line_number) + ": vote must be related or unrelated");
    }
    const auto key = std::make_pair(fields[0], fields[1]);
    auto it = position.find(key);
    if (it == position.end()) {
      it = position.emplace(key, votes.rows.size()).first;
      votes.rows.push_back(VoteRow{fields[0], fields[1], {}});
    }
    votes.rows[it->second].votes.push_back(vote);
  }
  return votes;
}

VoteAggregation aggregate_votes(const AssessorVotes& votes) {
  VoteAggregation out;
  for (const auto& row : votes.rows) {
    if (row.votes.empty()) {
      throw DataError("edge " + row.parent + " -> " + row.child + " has no votes");
    }
    const std::size_t total = row.votes.size();
    const auto related = static_cast<std::size_t>(
        std::count(row.votes.begin(), row.votes.end(), Vote::kRelated));
    // ceil(0.8 * total) in integers.
    const std::size_t needed = (4 * total + 4) / 5;
    out.edges.push_back(LabeledEdge{row.parent, row.child, related >= needed ? 1 : -1, related, total});
    ++out.agreement_histogram[std::max(related, total - related)];
  }
  return out;
}

std::vector<LabeledEdge> read_labels_csv(std::istream& input) {
  std::vector<LabeledEdge> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv(line);
    if (line_number == 1 && fields.size() == 3 && fields[0] == "parent") continue;
    if (fields.size() != 3 || (fields[2] != "1" && fields[2] != "-1")) {
      throw DataError("labels line " + std::to_string(line_number) + ": expected parent,child,{1,-1}");
    }
    labels.push_back(LabeledEdge{fields[0], fields[1], fields[2] == "1" ? 1 : -1, 0, 0});
  }
  return labels;
}

void write_labels_csv(const std::vector<LabeledEdge>& labels, std::ostream& output) {
  output << "parent,child,label\n";
  for (const auto& edge : labels) output << edge.parent << ',' << edge.child << ',' << edge.label << '\n';
}

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw ArgumentError("roc_auc: size mismatch");
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (labels[i] != 1 && labels[i] != -1) throw ArgumentError("roc_auc: labels must be +1/-1");
    if (std::isnan(scores[i])) throw ArgumentError("roc_auc: NaN score");
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mann-Whitney U from mid-ranks.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t m = i; m < j; ++m) {
      if (labels[order[m]] == 1) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw ArgumentError("roc_auc: both positive and negative labels are required");
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

}  // namespace topicmap
