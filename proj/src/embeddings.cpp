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

#include "topicmap/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace topicmap {

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ArgumentError("embedding dimension must be positive");
}

bool EmbeddingStore::contains(const std::string& surface) const {
  return vectors_.count(surface) > 0;
}

bool EmbeddingStore::insert(const std::string& surface, std::span<const double> vector) {
  if (vector.size() != dim_) throw ArgumentError("embedding for '" + surface + "' has wrong dimension");
  double norm = 0.0;
  for (double v : vector) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  std::vector<double> unit(vector.begin(), vector.end());
  for (double& v : unit) v /= norm;
  vectors_[surface] = std::move(unit);
  return true;
}

std::optional<std::span<const double>> EmbeddingStore::find(const std::string& surface) const {
  const auto it = vectors_.find(surface);
  if (it == vectors_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

double EmbeddingStore::dot(const std::string& a, const std::string& b) const {
  const auto va = find(a);
  const auto vb = find(b);
  if (!va || !vb) return kNaN;
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += (*va)[i] * (*vb)[i];
  return sum;
}

EmbeddingStore EmbeddingStore::read(std::istream& input) {
  std::string line;
  if (!std::getline(input, line)) throw DataError("embedding file is empty");
  std::size_t vocab = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> vocab >> dim) || dim == 0) {
      throw DataError("embedding header must be '<vocab_size> <dim>'");
    }
  }
  EmbeddingStore store(dim);
  std::vector<double> vector(dim);
  std::size_t line_number = 1;
  std::size_t skipped = 0;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string surface;
    fields >> surface;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!(fields >> vector[i])) {
        throw DataError("embedding line " + std::to_string(line_number) + ": expected " +
                        std::to_string(dim) + " values");
      }
    }
    if (!store.insert(surface, vector)) ++skipped;
  }
  if (skipped > 0) warn("skipped " + std::to_string(skipped) + " zero or non-finite embeddings");
  if (store.size() + skipped != vocab) {
    warn("embedding header declares " + std::to_string(vocab) + " vectors, found " +
         std::to_string(store.size() + skipped));
  }
  return store;
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open embeddings " + path.string());
  return read(input);
}

void EmbeddingStore::write(std::ostream& output) const {
  output << vectors_.size() << ' ' << dim_ << '\n';
  for (const auto& [surface, vector] : vectors_) {
    output << surface;
    for (double v : vector) output << ' ' << fmt::format("{:.12g}", v);
    output << '\n';
  }
}

}  // namespace topicmap
