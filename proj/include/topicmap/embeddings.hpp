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

#ifndef TOPICMAP_EMBEDDINGS_HPP_
#define TOPICMAP_EMBEDDINGS_HPP_

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topicmap/common.hpp"

namespace topicmap {

// Token surface -> unit-length vector. Vectors are L2-normalized on insert,
// so inner products are cosine similarities.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool contains(const std::string& surface) const;
  // Returns false (and stores nothing) for a zero or non-finite vector.
  bool insert(const std::string& surface, std::span<const double> vector);
  std::optional<std::span<const double>> find(const std::string& surface) const;
  double dot(const std::string& a, const std::string& b) const;

  // Text format: "<vocab_size> <dim>" header, then "<token> f1 ... fdim".
  static EmbeddingStore load(const std::filesystem::path& path);
  static EmbeddingStore read(std::istream& input);
  void write(std::ostream& output) const;

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> vectors_;
};

}  // namespace topicmap

#endif  // TOPICMAP_EMBEDDINGS_HPP_
