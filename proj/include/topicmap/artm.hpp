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

// One flat level of an additively regularized topic model: EM training,
// fold-in inference for unseen documents, likelihood, and top tokens.

#ifndef TOPICMAP_ARTM_HPP_
#define TOPICMAP_ARTM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topicmap/corpus.hpp"
#include "topicmap/em_kernels.hpp"

namespace topicmap {

using ModalityWeights = std::map<Modality, double>;

ModalityWeights default_modality_weights();

struct TopicModel {
  std::vector<Token> tokens;              // rows of phi
  std::vector<std::string> topic_ids;     // columns of phi, rows of theta
  std::vector<std::string> document_ids;  // columns of theta
  PhiMatrix phi;
  ThetaMatrix theta;
  ModalityWeights modality_weights = default_modality_weights();
  std::uint64_t seed = 0;

  std::size_t n_topics() const { return topic_ids.size(); }
  std::optional<std::size_t> token_row(const Token& token) const;
  std::optional<std::size_t> topic_index(const std::string& id) const;
  std::optional<std::size_t> document_column(const std::string& id) const;
  // Rebuilds the lookup tables after tokens/topic_ids/document_ids change.
  void reindex();

 private:
  std::map<Token, std::size_t> token_rows_;
  std::map<std::string, std::size_t> topic_lookup_;
  std::map<std::string, std::size_t> document_lookup_;
};

enum class RegularizerKind { kNone, kDirichletSmoothSparse, kDecorrelation };

// Additive regularizer term tau * R(Phi, Theta). For the Dirichlet kind,
// alpha (per topic) and beta (per token) hold one value to broadcast or one
// value per element; R = sum (beta_w - 1) ln phi_wt + sum (alpha_t - 1) ln theta_td.
// Decorrelation penalizes sum over topic pairs of sum_w phi_wt phi_ws.
struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::kNone;
  double tau = 1.0;
  std::vector<double> alpha{1.0};
  std::vector<double> beta{1.0};
};

enum class EStepKernel { kParallel, kReference };

struct TrainConfig {
  std::size_t n_topics = 1;
  std::size_t max_iterations = 50;
  double ll_rel_tolerance = 1e-4;
  std::vector<RegularizerSpec> regularizers;
  std::uint64_t seed = 0;
  ModalityWeights modality_weights = default_modality_weights();
  int threads = 0;
  EStepKernel kernel = EStepKernel::kParallel;
  std::string topic_prefix = "topic_";

  void validate() const;
};

struct TrainReport {
  // Log-likelihood of the initial parameters followed by one entry per
  // EM iteration.
  std::vector<double> log_likelihood;
  std::size_t iterations = 0;
  bool converged = false;
};

struct TrainResult {
  TopicModel model;
  TrainReport report;
};

// Warm start: phi rows are matched by token, theta columns by document id.
// Tokens unknown to the prior get small seeded random rows; documents
// unknown to it start from a fold-in against the prior phi.
struct WarmStart {
  const TopicModel* prior = nullptr;
};

TrainResult train(const CorpusSet& corpus, const TrainConfig& config,
                  std::optional<WarmStart> warm_start = std::nullopt);

// Lower-level entry point shared with hierarchy fitting. `phi` and `theta`
// hold the initial parameters and are updated in place.
TrainReport run_em(const SparseCounts& counts, const TrainConfig& config, PhiMatrix& phi,
                   ThetaMatrix& theta);

// Builds modality-weighted counts over the given token rows; tokens absent
// from `rows` are dropped.
SparseCounts build_counts(const CorpusSet& corpus, const std::map<Token, std::size_t>& rows,
                          const ModalityWeights& weights);

// Seeded uniform-random positive columns, normalized.
PhiMatrix random_phi(std::size_t n_tokens, std::size_t n_topics, std::uint64_t seed);

// Topic distribution of an unseen document with phi frozen; tokens unknown
// to the model are ignored. Throws DataError("out-of-vocabulary document")
// when nothing is shared.
std::vector<double> fold_in(const TopicModel& model,
                            std::span<const std::pair<Token, double>> counts,
                            std::size_t iterations);
std::vector<double> fold_in(const TopicModel& model, const Document& doc,
                            std::size_t iterations);

struct LogLikelihood {
  // -infinity when any observed token has p(w|d) == 0.
  double value = 0.0;
  std::size_t zero_probabilities = 0;
};

// Weighted objective sum_d sum_w tau_m n_dw ln sum_t phi_wt theta_td. Every
// corpus document must have a theta column (matched by id).
LogLikelihood log_likelihood(const TopicModel& model, const CorpusSet& corpus);

// Top-n tokens of one modality by phi descending, ties by surface.
std::vector<Token> top_tokens(const TopicModel& model, std::size_t topic, std::size_t n,
                              Modality modality);

std::vector<double> phi_column(const TopicModel& model, std::size_t topic);

}  // namespace topicmap

#endif  // TOPICMAP_ARTM_HPP_
