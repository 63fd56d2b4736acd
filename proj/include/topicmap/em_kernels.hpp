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

// E-step kernels for regularized EM on sparse count data. The serial
// reference is the definition; the OpenMP kernel must reproduce it bit for
// bit for any thread count (checked in tests, timed in bench/).

#ifndef TOPICMAP_EM_KERNELS_HPP_
#define TOPICMAP_EM_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "topicmap/common.hpp"

namespace topicmap {

// Token x topic, row-major so that one token's topic weights are contiguous.
using PhiMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// Topic x document, column-major so that one document's column is contiguous.
using ThetaMatrix = Eigen::MatrixXd;

// Guard for ln(0).
inline constexpr double kMinProbability = 1e-30;

// Document-major CSR matrix of (modality-weighted) counts.
struct SparseCounts {
  std::size_t n_tokens = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> tokens;
  std::vector<double> values;

  std::size_t n_docs() const { return offsets.size() - 1; }
  std::size_t nnz() const { return tokens.size(); }
  void add_document(const std::vector<std::pair<std::uint32_t, double>>& entries);
};

// Token-major view of a SparseCounts: for each token, the CSR entry
// positions in increasing document order.
struct TokenMajorIndex {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> entries;
  std::vector<std::uint32_t> docs;

  explicit TokenMajorIndex(const SparseCounts& counts);
};

struct EStepResult {
  PhiMatrix n_wt;
  ThetaMatrix n_td;
  // Weighted log-likelihood of the parameters the E-step was run with.
  double log_likelihood = 0.0;
  // Observed (d, w) entries with p(w|d) == 0.
  std::size_t zero_probabilities = 0;
};

namespace reference {

EStepResult e_step(const SparseCounts& counts, const PhiMatrix& phi,
                   const ThetaMatrix& theta);

}  // namespace reference

namespace parallel {

// threads <= 0 uses the OpenMP default.
EStepResult e_step(const SparseCounts& counts, const TokenMajorIndex& index,
                   const PhiMatrix& phi, const ThetaMatrix& theta, int threads = 0);

}  // namespace parallel

}  // namespace topicmap

#endif  // TOPICMAP_EM_KERNELS_HPP_
