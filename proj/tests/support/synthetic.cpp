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

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace topicmap::synthetic {

namespace {

std::size_t sample_index(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

// Zipf-like weights 1/(j+1) within each topic block.
std::vector<double> block_weights(std::size_t n) {
  std::vector<double> weights(n);
  for (std::size_t j = 0; j < n; ++j) weights[j] = 1.0 / static_cast<double>(j + 1);
  return weights;
}

}  // namespace

std::string topic_word(std::size_t topic, std::size_t j) {
  return "t" + std::to_string(topic) + "_w" + std::to_string(j);
}

std::string topic_tag(std::size_t topic, std::size_t j) {
  return "t" + std::to_string(topic) + "_tag" + std::to_string(j);
}

std::string background_word(std::size_t j) { return "bg" + std::to_string(j); }

Collection sample_collection(const GeneratorConfig& config, std::size_t n_docs,
                             const std::string& collection_id, std::uint64_t seed) {
  if (config.topics.empty()) throw ArgumentError("generator has no topics");
  Rng rng(seed);
  std::vector<double> word_cdf;
  for (double w : block_weights(config.words_per_topic)) word_cdf.push_back((word_cdf.empty() ? 0.0 : word_cdf.back()) + w);
  std::vector<double> tag_cdf;
  for (double w : block_weights(config.tags_per_topic)) tag_cdf.push_back((tag_cdf.empty() ? 0.0 : tag_cdf.back()) + w);

  Collection collection;
  collection.id = collection_id;
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::vector<std::size_t> chosen;
    const std::size_t k = std::min(config.topics_per_doc, config.topics.size());
    std::vector<std::size_t> pool = config.topics;
    rng.shuffle(pool);
    chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<double> mix(k);
    double total = 0.0;
    for (auto& m : mix) {
      m = 0.2 + rng.uniform();
      total += m;
    }
    std::vector<double> mix_cdf;
    for (double m : mix) mix_cdf.push_back((mix_cdf.empty() ? 0.0 : mix_cdf.back()) + m / total);

    std::map<Token, std::uint32_t> counts;
    for (std::size_t i = 0; i < config.doc_length; ++i) {
      if (config.background_words > 0 && rng.uniform() < config.background_mass) {
        ++counts[Token{background_word(rng.below(config.background_words)), Modality::kWord}];
        continue;
      }
      const std::size_t topic = chosen[sample_index(mix_cdf, rng)];
      ++counts[Token{topic_word(topic, sample_index(word_cdf, rng)), Modality::kWord}];
    }
    for (std::size_t i = 0; i < config.tags_per_doc && config.tags_per_topic > 0; ++i) {
      const std::size_t topic = chosen[sample_index(mix_cdf, rng)];
      ++counts[Token{topic_tag(topic, sample_index(tag_cdf, rng)), Modality::kTag}];
    }

    Document doc;
    doc.id = collection_id + "_" + std::to_string(d);
    doc.collection_id = collection_id;
    for (const auto& [token, count] : counts) {
      doc.counts.emplace_back(token, count);
      doc.length += count;
    }
    collection.documents.push_back(std::move(doc));
  }
  collection.rebuild_vocabulary();
  return collection;
}

EmbeddingStore topic_embeddings(std::size_t n_global_topics, const GeneratorConfig& shape,
                                double noise, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t dim = n_global_topics + shape.background_words;
  EmbeddingStore store(dim);
  const auto weights = block_weights(shape.words_per_topic);
  for (std::size_t g = 0; g < n_global_topics; ++g) {
    for (std::size_t j = 0; j < shape.words_per_topic; ++j) {
      std::vector<double> v(dim);
      for (auto& x : v) x = noise * (rng.uniform() - 0.5);
      v[g] += 1.0 + 0.1 * weights[j];
      store.insert(topic_word(g, j), v);
    }
  }
  for (std::size_t j = 0; j < shape.background_words; ++j) {
    std::vector<double> v(dim);
    for (auto& x : v) x = noise * (rng.uniform() - 0.5);
    v[n_global_topics + j] += 1.0;
    store.insert(background_word(j), v);
  }
  return store;
}

GeneratorConfig heterogeneous_shape() {
  GeneratorConfig shape;
  shape.topics = {0, 1, 2, 3, 4};
  shape.doc_length = 100;
  shape.topics_per_doc = 3;
  shape.background_mass = 0.1;
  return shape;
}

HeterogeneousCorpus heterogeneous_corpus(std::uint64_t seed) {
  const GeneratorConfig base = heterogeneous_shape();
  GeneratorConfig shifted_a = base;
  shifted_a.topics = {0, 1, 5, 6};
  GeneratorConfig shifted_b = base;
  shifted_b.topics = {2, 7, 8};
  HeterogeneousCorpus corpus;
  corpus.base = sample_collection(base, 200, "base", seed * 10);
  corpus.shifted.push_back(sample_collection(shifted_a, 100, "new_a", seed * 10 + 1));
  corpus.shifted.push_back(sample_collection(shifted_b, 100, "new_b", seed * 10 + 2));
  corpus.embeddings = topic_embeddings(9, base, 0.2, seed);
  return corpus;
}

Collection random_collection(std::size_t n_docs, std::size_t n_tokens, std::size_t max_length,
                             const std::string& collection_id, std::uint64_t seed) {
  Rng rng(seed);
  Collection collection;
  collection.id = collection_id;
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::map<Token, std::uint32_t> counts;
    const std::size_t length = 1 + rng.below(max_length);
    for (std::size_t i = 0; i < length; ++i) {
      ++counts[Token{"w" + std::to_string(rng.below(n_tokens)), Modality::kWord}];
    }
    Document doc;
    doc.id = collection_id + "_" + std::to_string(d);
    doc.collection_id = collection_id;
    for (const auto& [token, count] : counts) {
      doc.counts.emplace_back(token, count);
      doc.length += count;
    }
    collection.documents.push_back(std::move(doc));
  }
  collection.rebuild_vocabulary();
  return collection;
}

}  // namespace topicmap::synthetic
