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

#include "topicmap/artm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <omp.h>

namespace topicmap {

ModalityWeights default_modality_weights() {
  return {{Modality::kWord, 1.0}, {Modality::kTag, 1.0}};
}

std::optional<std::size_t> TopicModel::token_row(const Token& token) const {
  const auto it = token_rows_.find(token);
  if (it == token_rows_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TopicModel::topic_index(const std::string& id) const {
  const auto it = topic_lookup_.find(id);
  if (it == topic_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TopicModel::document_column(const std::string& id) const {
  const auto it = document_lookup_.find(id);
  if (it == document_lookup_.end()) return std::nullopt;
  return it->second;
}

void TopicModel::reindex() {
  token_rows_.clear();
  topic_lookup_.clear();
  document_lookup_.clear();
  for (std::size_t i = 0; i < tokens.size(); ++i) token_rows_.emplace(tokens[i], i);
  for (std::size_t i = 0; i < topic_ids.size(); ++i) topic_lookup_.emplace(topic_ids[i], i);
  for (std::size_t i = 0; i < document_ids.size(); ++i) document_lookup_.emplace(document_ids[i], i);
}

void TrainConfig::validate() const {
  if (n_topics == 0) throw ArgumentError("n_topics must be >= 1");
  if (max_iterations == 0) throw ArgumentError("max_iterations must be >= 1");
  if (!(ll_rel_tolerance > 0.0)) throw ArgumentError("ll_rel_tolerance must be > 0");
  for (const auto& [modality, weight] : modality_weights) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw ArgumentError("modality weights must be finite and nonnegative");
    }
  }
  for (const auto& reg : regularizers) {
    if (!std::isfinite(reg.tau)) throw ArgumentError("regularizer tau must be finite");
    for (double a : reg.alpha) {
      if (!std::isfinite(a)) throw ArgumentError("dirichlet alpha must be finite");
    }
    for (double b : reg.beta) {
      if (!std::isfinite(b)) throw ArgumentError("dirichlet beta must be finite");
    }
    if (reg.kind == RegularizerKind::kDirichletSmoothSparse &&
        (reg.alpha.empty() || reg.beta.empty())) {
      throw ArgumentError("dirichlet regularizer needs alpha and beta");
    }
  }
}

namespace {

std::vector<std::string> make_topic_ids(const std::string& prefix, std::size_t n) {
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::string number = std::to_string(t);
    ids.push_back(prefix + std::string(width - number.size(), '0') + number);
  }
  return ids;
}

double broadcast(const std::vector<double>& values, std::size_t i) {
  return values.size() == 1 ? values[0] : values.at(i);
}

// phi_wt <- max(0, n_wt + r_wt) / sum_w max(0, n_wt + r_wt).
void m_step_phi(const PhiMatrix& n_wt, const std::vector<RegularizerSpec>& regs, PhiMatrix& phi) {
  const Eigen::Index rows = phi.rows();
  const Eigen::Index topics = phi.cols();
  PhiMatrix next = n_wt;
  for (const auto& reg : regs) {
    if (reg.kind == RegularizerKind::kDirichletSmoothSparse) {
      for (Eigen::Index w = 0; w < rows; ++w) {
        const double term = reg.tau * (broadcast(reg.beta, static_cast<std::size_t>(w)) - 1.0);
        if (term != 0.0) next.row(w).array() += term;
      }
    } else if (reg.kind == RegularizerKind::kDecorrelation && reg.tau != 0.0) {
      for (Eigen::Index w = 0; w < rows; ++w) {
        const double row_sum = phi.row(w).sum();
        for (Eigen::Index t = 0; t < topics; ++t) {
          next(w, t) -= reg.tau * phi(w, t) * (row_sum - phi(w, t));
        }
      }
    }
  }
  next = next.cwiseMax(0.0);
  for (Eigen::Index t = 0; t < topics; ++t) {
    double sum = 0.0;
    for (Eigen::Index w = 0; w < rows; ++w) sum += next(w, t);
    if (sum > 0.0) {
      for (Eigen::Index w = 0; w < rows; ++w) phi(w, t) = next(w, t) / sum;
      continue;
    }
    double raw = 0.0;
    for (Eigen::Index w = 0; w < rows; ++w) raw += n_wt(w, t);
    if (raw > 0.0) {
      warn("phi column " + std::to_string(t) + " emptied by regularization; using raw counts");
      for (Eigen::Index w = 0; w < rows; ++w) phi(w, t) = n_wt(w, t) / raw;
    } else {
      warn("phi column " + std::to_string(t) + " received no counts; kept previous values");
    }
  }
}

void m_step_theta(const ThetaMatrix& n_td, const std::vector<RegularizerSpec>& regs,
                  ThetaMatrix& theta, int threads) {
  const Eigen::Index topics = theta.rows();
  const auto docs = static_cast<std::int64_t>(theta.cols());
  std::vector<double> shift(static_cast<std::size_t>(topics), 0.0);
  for (const auto& reg : regs) {
    if (reg.kind != RegularizerKind::kDirichletSmoothSparse) continue;
    for (Eigen::Index t = 0; t < topics; ++t) {
      shift[t] += reg.tau * (broadcast(reg.alpha, static_cast<std::size_t>(t)) - 1.0);
    }
  }
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(n_threads)
  for (std::int64_t d = 0; d < docs; ++d) {
    std::vector<double> column(static_cast<std::size_t>(topics));
    double sum = 0.0;
    for (Eigen::Index t = 0; t < topics; ++t) {
      column[t] = std::max(0.0, n_td(t, d) + shift[t]);
      sum += column[t];
    }
    if (sum > 0.0) {
      for (Eigen::Index t = 0; t < topics; ++t) theta(t, d) = column[t] / sum;
      continue;
    }
    double raw = 0.0;
    for (Eigen::Index t = 0; t < topics; ++t) raw += n_td(t, d);
    if (raw > 0.0) {
      for (Eigen::Index t = 0; t < topics; ++t) theta(t, d) = n_td(t, d) / raw;
    }
  }
}

bool has_decorrelation(const std::vector<RegularizerSpec>& regs) {
  return std::any_of(regs.begin(), regs.end(), [](const RegularizerSpec& r) {
    return r.kind == RegularizerKind::kDecorrelation;
  });
}

}  // namespace

PhiMatrix random_phi(std::size_t n_tokens, std::size_t n_topics, std::uint64_t seed) {
  Rng rng(seed);
  PhiMatrix phi(n_tokens, n_topics);
  for (std::size_t w = 0; w < n_tokens; ++w) {
    for (std::size_t t = 0; t < n_topics; ++t) phi(w, t) = 1.0 - rng.uniform();
  }
  for (std::size_t t = 0; t < n_topics; ++t) phi.col(t) /= phi.col(t).sum();
  return phi;
}

SparseCounts build_counts(const CorpusSet& corpus, const std::map<Token, std::size_t>& rows,
                          const ModalityWeights& weights) {
  SparseCounts counts;
  counts.n_tokens = rows.size();
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t d = 0; d < corpus.num_documents(); ++d) {
    entries.clear();
    for (const auto& [token, count] : corpus.document(d).counts) {
      const auto row = rows.find(token);
      if (row == rows.end()) continue;
      const auto weight = weights.find(token.modality);
      const double tau = weight == weights.end() ? 1.0 : weight->second;
      if (tau == 0.0) continue;
      entries.emplace_back(static_cast<std::uint32_t>(row->second), tau * count);
    }
    counts.add_document(entries);
  }
  return counts;
}

TrainReport run_em(const SparseCounts& counts, const TrainConfig& config, PhiMatrix& phi,
                   ThetaMatrix& theta) {
  config.validate();
  if (static_cast<std::size_t>(phi.cols()) != config.n_topics ||
      theta.rows() != phi.cols()) {
    throw ArgumentError("run_em: parameter shapes do not match n_topics");
  }
  std::optional<TokenMajorIndex> index;
  if (config.kernel == EStepKernel::kParallel) index.emplace(counts);
  if (has_decorrelation(config.regularizers) && config.n_topics < 2) {
    warn("decorrelation regularizer has no effect with a single topic");
  }

  TrainReport report;
  for (std::size_t iteration = 0;; ++iteration) {
    EStepResult e = config.kernel == EStepKernel::kParallel
                        ? parallel::e_step(counts, *index, phi, theta, config.threads)
                        : reference::e_step(counts, phi, theta);
    if (!std::isfinite(e.log_likelihood)) {
      std::ostringstream message;
      message << "non-finite log-likelihood at iteration " << iteration << " ("
              << e.zero_probabilities << " zero-probability entries)";
      throw DataError(message.str());
    }
    report.log_likelihood.push_back(e.log_likelihood);
    if (iteration > 0) {
      const double previous = report.log_likelihood[iteration - 1];
      const double change = std::abs(e.log_likelihood - previous) /
                            std::max(std::abs(previous), std::numeric_limits<double>::min());
      if (change < config.ll_rel_tolerance) {
        report.converged = true;
        break;
      }
    }
    if (iteration == config.max_iterations) break;
    m_step_phi(e.n_wt, config.regularizers, phi);
    m_step_theta(e.n_td, config.regularizers, theta, config.threads);
    ++report.iterations;
  }
  return report;
}

TrainResult train(const CorpusSet& corpus, const TrainConfig& config,
                  std::optional<WarmStart> warm_start) {
  config.validate();
  if (corpus.num_documents() == 0) throw ArgumentError("train: empty corpus");
  if (config.n_topics > corpus.vocabulary_size()) {
    warn("n_topics (" + std::to_string(config.n_topics) + ") exceeds the number of distinct tokens (" +
         std::to_string(corpus.vocabulary_size()) + ")");
  }

  TopicModel model;
  model.tokens = corpus.tokens();
  model.topic_ids = make_topic_ids(config.topic_prefix, config.n_topics);
  model.document_ids = corpus.document_ids();
  model.modality_weights = config.modality_weights;
  model.seed = config.seed;
  model.reindex();

  std::map<Token, std::size_t> rows;
  for (std::size_t w = 0; w < model.tokens.size(); ++w) rows.emplace(model.tokens[w], w);
  const SparseCounts counts = build_counts(corpus, rows, config.modality_weights);

  const std::size_t n_tokens = model.tokens.size();
  const std::size_t n_docs = corpus.num_documents();
  const std::size_t topics = config.n_topics;
  const double uniform = 1.0 / static_cast<double>(topics);

  if (warm_start && warm_start->prior != nullptr) {
    const TopicModel& prior = *warm_start->prior;
    if (prior.n_topics() != topics) {
      throw ArgumentError("warm start prior has " + std::to_string(prior.n_topics()) +
                          " topics, config asks for " + std::to_string(topics));
    }
    Rng rng(config.seed);
    model.phi.resize(n_tokens, topics);
    for (std::size_t w = 0; w < n_tokens; ++w) {
      if (const auto row = prior.token_row(model.tokens[w])) {
        model.phi.row(w) = prior.phi.row(*row);
      } else {
        for (std::size_t t = 0; t < topics; ++t) {
          model.phi(w, t) = (1.0 - rng.uniform()) / static_cast<double>(n_tokens);
        }
      }
    }
    for (std::size_t t = 0; t < topics; ++t) {
      const double sum = model.phi.col(t).sum();
      if (sum > 0.0) model.phi.col(t) /= sum;
    }
    model.theta.resize(topics, n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
      const Document& doc = corpus.document(d);
      if (const auto column = prior.document_column(doc.id)) {
        model.theta.col(d) = prior.theta.col(*column);
        continue;
      }
      try {
        const auto theta = fold_in(prior, doc, 20);
        for (std::size_t t = 0; t < topics; ++t) model.theta(t, d) = theta[t];
      } catch (const DataError&) {
        model.theta.col(d).setConstant(uniform);
      }
    }
  } else {
    model.phi = random_phi(n_tokens, topics, config.seed);
    model.theta = ThetaMatrix::Constant(topics, n_docs, uniform);
  }

  TrainResult result;
  result.report = run_em(counts, config, model.phi, model.theta);
  result.model = std::move(model);
  return result;
}

std::vector<double> fold_in(const TopicModel& model,
                            std::span<const std::pair<Token, double>> counts,
                            std::size_t iterations) {
  const std::size_t topics = model.n_topics();
  std::vector<std::pair<std::size_t, double>> known;
  for (const auto& [token, count] : counts) {
    const auto row = model.token_row(token);
    if (!row || !(count > 0.0)) continue;
    const auto weight = model.modality_weights.find(token.modality);
    const double tau = weight == model.modality_weights.end() ? 1.0 : weight->second;
    if (tau == 0.0 || model.phi.row(*row).sum() <= 0.0) continue;
    known.emplace_back(*row, tau * count);
  }
  if (known.empty()) throw DataError("out-of-vocabulary document");

  std::vector<double> theta(topics, 1.0 / static_cast<double>(topics));
  std::vector<double> next(topics);
  for (std::size_t iteration = 0; iteration < iterations; ++iteration) {
    std::fill(next.begin(), next.end(), 0.0);
    for (const auto& [row, count] : known) {
      double z = 0.0;
      for (std::size_t t = 0; t < topics; ++t) z += model.phi(row, t) * theta[t];
      if (!(z > 0.0)) continue;
      const double ratio = count / z;
      for (std::size_t t = 0; t < topics; ++t) next[t] += ratio * model.phi(row, t) * theta[t];
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    if (!(sum > 0.0)) break;
    for (std::size_t t = 0; t < topics; ++t) theta[t] = next[t] / sum;
  }
  return theta;
}

std::vector<double> fold_in(const TopicModel& model, const Document& doc,
                            std::size_t iterations) {
  std::vector<std::pair<Token, double>> counts;
  counts.reserve(doc.counts.size());
  for (const auto& [token, count] : doc.counts) counts.emplace_back(token, count);
  return fold_in(model, counts, iterations);
}

LogLikelihood log_likelihood(const TopicModel& model, const CorpusSet& corpus) {
  LogLikelihood out;
  const std::size_t topics = model.n_topics();
  for (std::size_t d = 0; d < corpus.num_documents(); ++d) {
    const Document& doc = corpus.document(d);
    const auto column = model.document_column(doc.id);
    if (!column) throw DataError("log_likelihood: model has no theta column for '" + doc.id + "'");
    double doc_ll = 0.0;
    for (const auto& [token, count] : doc.counts) {
      const auto weight = model.modality_weights.find(token.modality);
      const double tau = weight == model.modality_weights.end() ? 1.0 : weight->second;
      if (tau == 0.0) continue;
      const auto row = model.token_row(token);
      double z = 0.0;
      if (row) {
        for (std::size_t t = 0; t < topics; ++t) z += model.phi(*row, t) * model.theta(t, *column);
      }
      if (!(z > 0.0)) {
        ++out.zero_probabilities;
        continue;
      }
      doc_ll += tau * count * std::log(z);
    }
    out.value += doc_ll;
  }
  if (out.zero_probabilities > 0) {
    warn("log_likelihood: " + std::to_string(out.zero_probabilities) +
         " observed tokens have zero probability");
    out.value = -std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<Token> top_tokens(const TopicModel& model, std::size_t topic, std::size_t n,
                              Modality modality) {
  if (topic >= model.n_topics()) throw ArgumentError("top_tokens: unknown topic");
  std::vector<std::size_t> rows;
  for (std::size_t w = 0; w < model.tokens.size(); ++w) {
    if (model.tokens[w].modality == modality) rows.push_back(w);
  }
  const auto by_weight = [&](std::size_t a, std::size_t b) {
    const double pa = model.phi(a, topic);
    const double pb = model.phi(b, topic);
    if (pa != pb) return pa > pb;
    return model.tokens[a].surface < model.tokens[b].surface;
  };
  const std::size_t take = std::min(n, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + take, rows.end(), by_weight);
  std::vector<Token> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(model.tokens[rows[i]]);
  return out;
}

std::vector<double> phi_column(const TopicModel& model, std::size_t topic) {
  std::vector<double> column(model.tokens.size());
  for (std::size_t w = 0; w < column.size(); ++w) column[w] = model.phi(w, topic);
  return column;
}

}  // namespace topicmap
