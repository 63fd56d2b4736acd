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

#include "topicmap/flat_quality.hpp"

#include <algorithm>
#include <cmath>
#include "topicmap/edge_scores.hpp"

namespace topicmap {

namespace {

void require_pairs(const std::vector<Token>& top) {
  if (top.size() < 2) throw DataError("degenerate topic: fewer than 2 top tokens");
}

double finish(double sum, std::size_t count, const char* measure) {
  if (count == 0) {
    warn(std::string(measure) + ": no scorable token pairs; reporting NaN");
    return kNaN;
  }
  return sum / static_cast<double>(count);
}

}  // namespace

double coherence(const std::vector<Token>& top, const CoocStats& cooc, double epsilon) {
  require_pairs(top);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < top.size(); ++i) {
    const std::uint32_t d_i = cooc.doc_freq(top[i]);
    if (d_i == 0) continue;
    for (std::size_t j = i + 1; j < top.size(); ++j) {
      if (!cooc.contains(top[j])) continue;
      sum += std::log((cooc.codoc_freq(top[i], top[j]) + epsilon) / d_i);
      ++count;
    }
  }
  return finish(sum, count, "coherence");
}

double coherence_tfidf(const std::vector<Token>& top, const CoocStats& cooc, double epsilon) {
  require_pairs(top);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    const auto pi = cooc.postings(top[i]);
    double denominator = 0.0;
    for (const auto& posting : pi) denominator += posting.tfidf;
    if (!(denominator > 0.0)) continue;
    for (std::size_t j = 0; j < top.size(); ++j) {
      if (i == j || top[i] == top[j] || !cooc.contains(top[j])) continue;
      const auto pj = cooc.postings(top[j]);
      double numerator = 0.0;
      auto a = pi.begin();
      auto b = pj.begin();
      while (a != pi.end() && b != pj.end()) {
        if (a->document < b->document) {
          ++a;
        } else if (b->document < a->document) {
          ++b;
        } else {
          numerator += a->tfidf * b->tfidf;
          ++a;
          ++b;
        }
      }
      sum += std::log((numerator + epsilon) / denominator);
      ++count;
    }
  }
  return finish(sum, count, "coherence_tfidf");
}

double coherence_embed(const std::vector<Token>& top, const EmbeddingStore& embeds) {
  std::vector<const Token*> usable;
  for (const auto& token : top) {
    if (embeds.contains(token.surface)) usable.push_back(&token);
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    for (std::size_t j = 0; j < usable.size(); ++j) {
      if (i == j || *usable[i] == *usable[j]) continue;
      sum += 1.0 - embeds.dot(usable[i]->surface, usable[j]->surface);
      ++count;
    }
  }
  return finish(sum, count, "coherence_embed");
}

double pmi_pair(double p_ij, double p_i, double p_j, double epsilon) {
  return std::log(p_ij + epsilon) - std::log(p_i + epsilon) - std::log(p_j + epsilon);
}

double npmi_pair(double p_ij, double p_i, double p_j, double epsilon) {
  const double joint = std::log(p_ij + epsilon);
  const double value = (joint - std::log(p_i + epsilon) - std::log(p_j + epsilon)) / -joint;
  return std::clamp(value, -1.0, 1.0);
}

double lcp_pair(double p_ij, double p_i, double epsilon) {
  return std::log(p_ij + epsilon) - std::log(p_i + epsilon);
}

namespace {

template <typename PairTerm>
double mean_over_pairs(const std::vector<Token>& top, PairTerm term) {
  require_pairs(top);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < top.size(); ++i) {
    for (std::size_t j = i + 1; j < top.size(); ++j) {
      sum += term(top[i], top[j]);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace

double pmi(const std::vector<Token>& top, const TokenProbabilities& probs, double epsilon) {
  return mean_over_pairs(top, [&](const Token& a, const Token& b) {
    return pmi_pair(probs.p(a, b), probs.p(a), probs.p(b), epsilon);
  });
}

double npmi(const std::vector<Token>& top, const TokenProbabilities& probs, double epsilon) {
  return mean_over_pairs(top, [&](const Token& a, const Token& b) {
    return npmi_pair(probs.p(a, b), probs.p(a), probs.p(b), epsilon);
  });
}

double lcp(const std::vector<Token>& top, const TokenProbabilities& probs, double epsilon) {
  return mean_over_pairs(top, [&](const Token& a, const Token& b) {
    return lcp_pair(probs.p(a, b), probs.p(a), epsilon);
  });
}

FlatScoreReport score_flat(const TopicModel& model, const CoocStats& cooc,
                           const EmbeddingStore* embeds, std::size_t n_top) {
  FlatScoreReport report;
  report.n_top = n_top;
  report.topic_ids = model.topic_ids;
  const TokenProbabilities probs = estimate_pw(cooc);
  for (std::size_t t = 0; t < model.n_topics(); ++t) {
    const auto top = top_tokens(model, t, n_top, Modality::kWord);
    auto& row = report.scores[model.topic_ids[t]];
    if (top.size() < 2) {
      warn("topic " + model.topic_ids[t] + " has fewer than 2 word tokens; scores are NaN");
      for (const char* name : {"coherence", "coherence_tfidf", "pmi", "npmi", "lcp"}) row[name] = kNaN;
      if (embeds != nullptr) row["coherence_embed"] = kNaN;
      continue;
    }
    row["coherence"] = coherence(top, cooc);
    row["coherence_tfidf"] = coherence_tfidf(top, cooc);
    if (embeds != nullptr) row["coherence_embed"] = coherence_embed(top, *embeds);
    row["pmi"] = pmi(top, probs);
    row["npmi"] = npmi(top, probs);
    row["lcp"] = lcp(top, probs);
  }
  return report;
}

void FlatScoreReport::write_tsv(std::ostream& output) const {
  output << "topic\tmeasure\tvalue\n";
  for (const auto& id : topic_ids) {
    const auto it = scores.find(id);
    if (it == scores.end()) continue;
    for (const auto& [name, value] : it->second) {
      output << id << '\t' << name << '\t' << format_real(value) << '\n';
    }
  }
}

nlohmann::json FlatScoreReport::to_json() const {
  nlohmann::json topics = nlohmann::json::object();
  for (const auto& [id, row] : scores) {
    nlohmann::json entry = nlohmann::json::object();
    for (const auto& [name, value] : row) {
      entry[name] = std::isnan(value) ? nlohmann::json(nullptr) : nlohmann::json(value);
    }
    topics[id] = entry;
  }
  return {{"n_top", n_top},
          {"epsilon", epsilon},
          {"coherence_epsilon", coherence_epsilon},
          {"topics", topics}};
}

}  // namespace topicmap
