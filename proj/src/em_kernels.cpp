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

#include "topicmap/em_kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace topicmap {

void SparseCounts::add_document(
    const std::vector<std::pair<std::uint32_t, double>>& entries) {
  for (const auto& [token, value] : entries) {
    if (token >= n_tokens) throw ArgumentError("SparseCounts: token index out of range");
    tokens.push_back(token);
    values.push_back(value);
  }
  offsets.push_back(tokens.size());
}

TokenMajorIndex::TokenMajorIndex(const SparseCounts& counts) {
  offsets.assign(counts.n_tokens + 1, 0);
  for (std::uint32_t token : counts.tokens) ++offsets[token + 1];
  for (std::size_t w = 0; w < counts.n_tokens; ++w) offsets[w + 1] += offsets[w];
  entries.resize(counts.nnz());
  docs.resize(counts.nnz());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t d = 0; d < counts.n_docs(); ++d) {
    for (std::size_t k = counts.offsets[d]; k < counts.offsets[d + 1]; ++k) {
      const std::size_t slot = cursor[counts.tokens[k]]++;
      entries[slot] = k;
      docs[slot] = static_cast<std::uint32_t>(d);
    }
  }
}

namespace {

void check_shapes(const SparseCounts& counts, const PhiMatrix& phi, const ThetaMatrix& theta) {
  if (static_cast<std::size_t>(phi.rows()) != counts.n_tokens ||
      static_cast<std::size_t>(theta.cols()) != counts.n_docs() ||
      phi.cols() != theta.rows()) {
    throw ArgumentError("e_step: matrix shapes do not match the counts");
  }
}

inline double mixture(const double* phi_row, const double* theta_col, Eigen::Index topics) {
  double z = 0.0;
  for (Eigen::Index t = 0; t < topics; ++t) z += phi_row[t] * theta_col[t];
  return z;
}

}  // namespace

namespace reference {

EStepResult e_step(const SparseCounts& counts, const PhiMatrix& phi, const ThetaMatrix& theta) {
  check_shapes(counts, phi, theta);
  const Eigen::Index topics = phi.cols();
  EStepResult out;
  out.n_wt = PhiMatrix::Zero(phi.rows(), topics);
  out.n_td = ThetaMatrix::Zero(topics, theta.cols());
  for (std::size_t d = 0; d < counts.n_docs(); ++d) {
    const double* theta_col = theta.col(static_cast<Eigen::Index>(d)).data();
    double* n_td_col = out.n_td.col(static_cast<Eigen::Index>(d)).data();
    double doc_ll = 0.0;
    for (std::size_t k = counts.offsets[d]; k < counts.offsets[d + 1]; ++k) {
      const std::uint32_t w = counts.tokens[k];
      const double c = counts.values[k];
      const double* phi_row = phi.row(w).data();
      const double z = mixture(phi_row, theta_col, topics);
      if (!(z > 0.0)) {
        ++out.zero_probabilities;
        doc_ll += c * std::log(kMinProbability);
        continue;
      }
      doc_ll += c * std::log(z);
      const double ratio = c / z;
      double* n_wt_row = out.n_wt.row(w).data();
      for (Eigen::Index t = 0; t < topics; ++t) {
        const double r = ratio * phi_row[t] * theta_col[t];
        n_wt_row[t] += r;
        n_td_col[t] += r;
      }
    }
    out.log_likelihood += doc_ll;
  }
  return out;
}

}  // namespace reference

namespace parallel {

EStepResult e_step(const SparseCounts& counts, const TokenMajorIndex& index,
                   const PhiMatrix& phi, const ThetaMatrix& theta, int threads) {
  check_shapes(counts, phi, theta);
  const Eigen::Index topics = phi.cols();
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
  const auto n_docs = static_cast<std::int64_t>(counts.n_docs());
  const auto n_tokens = static_cast<std::int64_t>(counts.n_tokens);

  EStepResult out;
  out.n_wt = PhiMatrix::Zero(phi.rows(), topics);
  out.n_td = ThetaMatrix::Zero(topics, theta.cols());
  // ratio[k] = c / z for entry k, or 0 when p(w|d) == 0.
  std::vector<double> ratio(counts.nnz(), 0.0);
  std::vector<double> doc_ll(counts.n_docs(), 0.0);
  std::vector<std::size_t> doc_zeros(counts.n_docs(), 0);

  // Pass 1: documents are independent; each owns its n_td column.
#pragma omp parallel for schedule(dynamic, 16) num_threads(n_threads)
  for (std::int64_t d = 0; d < n_docs; ++d) {
    const double* theta_col = theta.col(d).data();
    double* n_td_col = out.n_td.col(d).data();
    double ll = 0.0;
    for (std::size_t k = counts.offsets[d]; k < counts.offsets[d + 1]; ++k) {
      const std::uint32_t w = counts.tokens[k];
      const double c = counts.values[k];
      const double* phi_row = phi.row(w).data();
      const double z = mixture(phi_row, theta_col, topics);
      if (!(z > 0.0)) {
        ++doc_zeros[d];
        ll += c * std::log(kMinProbability);
        continue;
      }
      ll += c * std::log(z);
      ratio[k] = c / z;
      for (Eigen::Index t = 0; t < topics; ++t) {
        n_td_col[t] += ratio[k] * phi_row[t] * theta_col[t];
      }
    }
    doc_ll[d] = ll;
  }

  // Pass 2: tokens are independent; each owns its n_wt row and visits
  // documents in increasing order, matching the reference summation order.
#pragma omp parallel for schedule(dynamic, 64) num_threads(n_threads)
  for (std::int64_t w = 0; w < n_tokens; ++w) {
    const double* phi_row = phi.row(w).data();
    double* n_wt_row = out.n_wt.row(w).data();
    for (std::size_t slot = index.offsets[w]; slot < index.offsets[w + 1]; ++slot) {
      const std::size_t k = index.entries[slot];
      if (ratio[k] == 0.0) continue;
      const double* theta_col = theta.col(index.docs[slot]).data();
      for (Eigen::Index t = 0; t < topics; ++t) {
        n_wt_row[t] += ratio[k] * phi_row[t] * theta_col[t];
      }
    }
  }

  for (std::size_t d = 0; d < counts.n_docs(); ++d) {
    out.log_likelihood += doc_ll[d];
    out.zero_probabilities += doc_zeros[d];
  }
  return out;
}

}  // namespace parallel

}  // namespace topicmap
