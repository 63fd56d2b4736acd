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

// Flat topic quality over top-token lists: co-document coherence, tf-idf
// coherence, embedding coherence, PMI, NPMI and log conditional probability.
// All logarithms are natural. Pairs that cannot be scored are skipped and
// the normalizer shrinks accordingly; a topic with no scorable pair gets NaN.

#ifndef TOPICMAP_FLAT_QUALITY_HPP_
#define TOPICMAP_FLAT_QUALITY_HPP_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "topicmap/artm.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/embeddings.hpp"

namespace topicmap {

inline constexpr double kCoherenceEpsilon = 1.0;
inline constexpr double kSmoothingEpsilon = 1e-12;

// Mean over i < j of ln((d(w_i, w_j) + eps) / d(w_i)).
double coherence(const std::vector<Token>& top, const CoocStats& cooc,
                 double epsilon = kCoherenceEpsilon);
// Mean over ordered pairs i != j of
// ln((sum_{d ∋ w_i,w_j} tfidf(w_i,d) tfidf(w_j,d) + eps) / sum_{d ∋ w_i} tfidf(w_i,d)).
double coherence_tfidf(const std::vector<Token>& top, const CoocStats& cooc,
                       double epsilon = kSmoothingEpsilon);
// Mean over ordered pairs of 1 - <v(w_i), v(w_j)>.
double coherence_embed(const std::vector<Token>& top, const EmbeddingStore& embeds);

// Pair terms over smoothed probabilities p + eps.
double pmi_pair(double p_ij, double p_i, double p_j, double epsilon = kSmoothingEpsilon);
double npmi_pair(double p_ij, double p_i, double p_j, double epsilon = kSmoothingEpsilon);
double lcp_pair(double p_ij, double p_i, double epsilon = kSmoothingEpsilon);

double pmi(const std::vector<Token>& top, const TokenProbabilities& probs,
           double epsilon = kSmoothingEpsilon);
double npmi(const std::vector<Token>& top, const TokenProbabilities& probs,
            double epsilon = kSmoothingEpsilon);
double lcp(const std::vector<Token>& top, const TokenProbabilities& probs,
           double epsilon = kSmoothingEpsilon);

struct FlatScoreReport {
  std::size_t n_top = 10;
  double epsilon = kSmoothingEpsilon;
  double coherence_epsilon = kCoherenceEpsilon;
  std::vector<std::string> topic_ids;
  // topic id -> measure name -> value
  std::map<std::string, std::map<std::string, double>> scores;

  void write_tsv(std::ostream& output) const;
  nlohmann::json to_json() const;
};

// Scores every topic on its top-n word tokens. `embeds` may be null, in
// which case the embedding coherence is omitted.
FlatScoreReport score_flat(const TopicModel& model, const CoocStats& cooc,
                           const EmbeddingStore* embeds, std::size_t n_top = 10);

}  // namespace topicmap

#endif  // TOPICMAP_FLAT_QUALITY_HPP_
