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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "topicmap/flat_quality.hpp"

using namespace topicmap;

namespace {

Token word(const std::string& s) { return Token{s, Modality::kWord}; }

CorpusSet parse(const std::string& text) {
  std::istringstream input(text);
  return merge({ingest_stream(input, "c")});
}

const char* kFourDocs = "d1 a b\nd2 a b\nd3 a c\nd4 c\n";

}  // namespace

TEST_CASE("co-document coherence on the four-document corpus") {
  const CorpusSet corpus = parse(kFourDocs);
  const CoocStats cooc(corpus);
  // ln((2 + 1) / 3)
  CHECK(coherence({word("a"), word("b")}, cooc) == doctest::Approx(0.0));
  // ln((2 + 1) / 2) with b first.
  CHECK(coherence({word("b"), word("a")}, cooc) == doctest::Approx(std::log(1.5)));
  // Three tokens average the three i < j pairs.
  const double expected = (std::log(3.0 / 3.0) + std::log(2.0 / 3.0) + std::log(1.0 / 2.0)) / 3.0;
  CHECK(coherence({word("a"), word("b"), word("c")}, cooc) == doctest::Approx(expected));
}

TEST_CASE("always co-occurring tokens give a small positive coherence") {
  std::string text;
  for (int d = 0; d < 50; ++d) text += "d" + std::to_string(d) + " x y\n";
  const CoocStats cooc(parse(text + "z1 q\n"));
  const double value = coherence({word("x"), word("y")}, cooc);
  CHECK(value == doctest::Approx(std::log(51.0 / 50.0)));
  CHECK(value > 0.0);
  CHECK(value < 0.05);
}

TEST_CASE("fewer than two top tokens is a degenerate topic") {
  const CoocStats cooc(parse(kFourDocs));
  CHECK_THROWS_WITH_AS(coherence({word("a")}, cooc), doctest::Contains("degenerate topic"), DataError);
  const TokenProbabilities probs = estimate_pw(cooc);
  CHECK_THROWS_AS(pmi({}, probs), DataError);
}

TEST_CASE("tokens outside the co-occurrence corpus are skipped") {
  const CoocStats cooc(parse(kFourDocs));
  CHECK(coherence({word("a"), word("missing"), word("b")}, cooc) == doctest::Approx(0.0));
  WarningCapture warnings;
  CHECK(std::isnan(coherence({word("missing"), word("other")}, cooc)));
  CHECK(warnings.contains("no scorable token pairs"));
}

TEST_CASE("tf-idf coherence of a pair that only occurs together") {
  const CoocStats cooc(parse("d1 a b\nd2 c\n"));
  const double s = 1.5 * std::log(2.0);
  CHECK(cooc.tfidf(word("a"), 0) == doctest::Approx(s));
  const double expected = std::log((s * s + kSmoothingEpsilon) / s);
  CHECK(coherence_tfidf({word("a"), word("b")}, cooc) == doctest::Approx(expected));
}

TEST_CASE("tf-idf coherence of a pair that never co-occurs") {
  const CoocStats cooc(parse("d1 a x\nd2 b x\nd3 y\n"));
  const double s = 1.5 * std::log(3.0);
  const double expected = std::log(kSmoothingEpsilon / s);
  CHECK(coherence_tfidf({word("a"), word("b")}, cooc) == doctest::Approx(expected));
}

TEST_CASE("tf-idf coherence is NaN when every idf is zero") {
  const CoocStats cooc(parse("d1 a b\n"));
  WarningCapture warnings;
  CHECK(std::isnan(coherence_tfidf({word("a"), word("b")}, cooc)));
  CHECK_FALSE(warnings.messages().empty());
}

TEST_CASE("embedding coherence") {
  EmbeddingStore embeds(2);
  const double same[] = {0.3, 0.4};
  const double x[] = {1.0, 0.0};
  const double y[] = {0.0, 2.0};
  const double rotated[] = {-0.5, std::sqrt(3.0) / 2.0};
  embeds.insert("s1", same);
  embeds.insert("s2", same);
  embeds.insert("x", x);
  embeds.insert("y", y);
  embeds.insert("r", rotated);
  CHECK(coherence_embed({word("s1"), word("s2")}, embeds) == doctest::Approx(0.0));
  CHECK(coherence_embed({word("x"), word("y")}, embeds) == doctest::Approx(1.0));
  CHECK(coherence_embed({word("x"), word("r")}, embeds) == doctest::Approx(1.5));
  WarningCapture warnings;
  CHECK(std::isnan(coherence_embed({word("x"), word("unknown")}, embeds)));
}

TEST_CASE("pairwise probability measures") {
  CHECK(pmi_pair(0.4, 0.5, 0.5) == doctest::Approx(std::log(1.6)).epsilon(1e-9));
  CHECK(std::log(1.6) == doctest::Approx(0.4700).epsilon(1e-4));
  CHECK(npmi_pair(0.4, 0.5, 0.5) == doctest::Approx(0.5129).epsilon(1e-4));
  CHECK(npmi_pair(0.3, 0.3, 0.3) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lcp_pair(0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pmi_pair(0.25, 0.5, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(npmi_pair(0.25, 0.5, 0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pmi_pair(0.1, 0.5, 0.5) < 0.0);
  CHECK(npmi_pair(0.0, 0.5, 0.5) >= -1.0);
}

TEST_CASE("topic-level probability measures average the pair terms") {
  const CoocStats cooc(parse(kFourDocs));
  const TokenProbabilities probs = estimate_pw(cooc);
  const double pab = pmi_pair(0.5, 0.75, 0.5);
  CHECK(pmi({word("a"), word("b")}, probs) == doctest::Approx(pab));
  CHECK(pmi({word("b"), word("a")}, probs) == doctest::Approx(pab));
  CHECK(npmi({word("b"), word("a")}, probs) == doctest::Approx(npmi({word("a"), word("b")}, probs)));
  CHECK(lcp({word("a"), word("b")}, probs) == doctest::Approx(lcp_pair(0.5, 0.75)));
  CHECK(lcp({word("b"), word("a")}, probs) == doctest::Approx(lcp_pair(0.5, 0.5)));
}

TEST_CASE("NPMI stays in [-1, 1] on a random corpus") {
  const Collection c = synthetic::random_collection(30, 20, 15, "r", 3);
  const CorpusSet corpus = merge({c});
  const CoocStats cooc(corpus);
  const TokenProbabilities probs = estimate_pw(cooc);
  const auto& tokens = corpus.tokens();
  for (const Token& a : tokens) {
    for (const Token& b : tokens) {
      if (a == b) continue;
      const double value = npmi_pair(probs.p(a, b), probs.p(a), probs.p(b));
      CHECK(value >= -1.0 - 1e-9);
      CHECK(value <= 1.0 + 1e-9);
      const double pmi_value = pmi_pair(probs.p(a, b), probs.p(a), probs.p(b));
      const double excess = probs.p(a, b) - probs.p(a) * probs.p(b);
      if (std::abs(excess) > 1e-9) CHECK((pmi_value > 0) == (excess > 0));
    }
  }
}

TEST_CASE("flat scores attach to topic content, not column position") {
  synthetic::GeneratorConfig generator;
  generator.topics = {0, 1, 2};
  const CorpusSet corpus = merge({synthetic::sample_collection(generator, 50, "s", 2)});
  TrainConfig config;
  config.n_topics = 3;
  const TopicModel model = train(corpus, config).model;
  const CoocStats cooc(corpus);
  const FlatScoreReport report = score_flat(model, cooc, nullptr, 8);

  TopicModel permuted = model;
  permuted.topic_ids = {model.topic_ids[2], model.topic_ids[0], model.topic_ids[1]};
  permuted.phi.col(0) = model.phi.col(2);
  permuted.phi.col(1) = model.phi.col(0);
  permuted.phi.col(2) = model.phi.col(1);
  permuted.reindex();
  const FlatScoreReport again = score_flat(permuted, cooc, nullptr, 8);
  CHECK(report.scores == again.scores);
  for (const auto& [id, row] : report.scores) {
    CHECK(row.size() == 5);
    CHECK_FALSE(row.count("coherence_embed"));
    CHECK(row.at("npmi") >= -1.0);
    CHECK(row.at("npmi") <= 1.0);
  }
  std::ostringstream tsv;
  report.write_tsv(tsv);
  CHECK(tsv.str().rfind("topic\tmeasure\tvalue\n", 0) == 0);
  CHECK(report.to_json()["topics"].size() == 3);
}
