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

// E-step throughput: serial reference against the OpenMP kernel.

#include <map>

#include <benchmark/benchmark.h>

#include "synthetic.hpp"
#include "topicmap/artm.hpp"
#include "topicmap/em_kernels.hpp"

using namespace topicmap;

namespace {

struct Fixture {
  SparseCounts counts;
  PhiMatrix phi;
  ThetaMatrix theta;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    synthetic::GeneratorConfig generator;
    generator.topics = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    generator.words_per_topic = 200;
    generator.doc_length = 300;
    const CorpusSet corpus = merge({synthetic::sample_collection(generator, 4000, "bench", 1)});
    std::map<Token, std::size_t> rows;
    for (std::size_t i = 0; i < corpus.tokens().size(); ++i) rows.emplace(corpus.tokens()[i], i);
    Fixture out;
    out.counts = build_counts(corpus, rows, default_modality_weights());
    constexpr std::size_t kTopics = 40;
    out.phi = random_phi(out.counts.n_tokens, kTopics, 2);
    out.theta = ThetaMatrix::Constant(kTopics, static_cast<Eigen::Index>(out.counts.n_docs()), 1.0 / kTopics);
    return out;
  }();
  return f;
}

void BM_ReferenceEStep(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(reference::e_step(f.counts, f.phi, f.theta));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.counts.nnz()));
}

void BM_ParallelEStep(benchmark::State& state) {
  const Fixture& f = fixture();
  const TokenMajorIndex index(f.counts);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(parallel::e_step(f.counts, index, f.phi, f.theta, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.counts.nnz()));
}

}  // namespace

BENCHMARK(BM_ReferenceEStep)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ParallelEStep)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
