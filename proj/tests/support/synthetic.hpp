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

// Seeded synthetic corpora for tests and benchmarks. Every generator topic
// owns a block of words "t<g>_w<j>" and tags "t<g>_tag<j>"; documents mix a
// few topics plus shared background words. Embeddings are derived from the
// generator topics, so words of one topic are near each other.

#ifndef TOPICMAP_TESTS_SYNTHETIC_HPP_
#define TOPICMAP_TESTS_SYNTHETIC_HPP_

#include <cstdint>
#include <string>
#include <vector>
#include "topicmap/corpus.hpp"
#include "topicmap/embeddings.hpp"

namespace topicmap::synthetic {

struct GeneratorConfig {
  std::vector<std::size_t> topics;  // global topic ids used by this generator
  std::size_t words_per_topic = 12;
  std::size_t tags_per_topic = 3;
  std::size_t background_words = 10;
  double background_mass = 0.1;
  std::size_t topics_per_doc = 2;
  std::size_t doc_length = 60;
  std::size_t tags_per_doc = 2;
};

std::string topic_word(std::size_t topic, std::size_t j);
std::string topic_tag(std::size_t topic, std::size_t j);
std::string background_word(std::size_t j);

// Documents are named "<collection_id>_<index>".
Collection sample_collection(const GeneratorConfig& config, std::size_t n_docs,
                             const std::string& collection_id, std::uint64_t seed);

// One dimension per global topic plus one per background word, with
// seeded noise of relative size `noise`.
EmbeddingStore topic_embeddings(std::size_t n_global_topics, const GeneratorConfig& shape,
                                double noise, std::uint64_t seed);

// Base collection of 200 documents over topics 0-4 and two shifted
// collections of 100 documents each (topics {0,1,5,6} and {2,7,8}), with
// embeddings over all nine generator topics.
struct HeterogeneousCorpus {
  Collection base;
  std::vector<Collection> shifted;
  EmbeddingStore embeddings{1};
};

GeneratorConfig heterogeneous_shape();
HeterogeneousCorpus heterogeneous_corpus(std::uint64_t seed);

// Uniform random small corpus: n_docs documents over n_tokens word tokens.
Collection random_collection(std::size_t n_docs, std::size_t n_tokens, std::size_t max_length,
                             const std::string& collection_id, std::uint64_t seed);

}  // namespace topicmap::synthetic

#endif  // TOPICMAP_TESTS_SYNTHETIC_HPP_
