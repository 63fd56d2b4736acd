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

#include "topicmap/edge_quality.hpp"

#include <cmath>
#include <set>

#include <omp.h>

namespace topicmap {

double embed_sim(const std::vector<Token>& parent_top, const std::vector<Token>& child_top,
                 const EmbeddingStore& embeds) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& a : parent_top) {
    if (!embeds.contains(a.surface)) continue;
    for (const auto& t : child_top) {
      if (a == t || !embeds.contains(t.surface)) continue;
      sum += embeds.dot(a.surface, t.surface);
      ++count;
    }
  }
  if (count == 0) {
    warn("embed_sim: no scorable token pairs; reporting NaN");
    return kNaN;
  }
  return sum / static_cast<double>(count);
}

double cooc_sim(const std::vector<Token>& parent_top, const std::vector<Token>& child_top,
                const CoocStats& cooc, double epsilon) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& t : child_top) {
    const std::uint32_t d_t = cooc.doc_freq(t);
    if (d_t == 0) continue;
    for (const auto& a : parent_top) {
      if (a == t || !cooc.contains(a)) continue;
      sum += std::log((cooc.codoc_freq(a, t) + epsilon) / d_t);
      ++count;
    }
  }
  if (count == 0) {
    warn("cooc_sim: no scorable token pairs; reporting NaN");
    return kNaN;
  }
  return sum / static_cast<double>(count);
}

double hellinger_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw ArgumentError("hellinger: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += diff * diff;
  }
  return std::min(1.0, std::sqrt(sum) / std::sqrt(2.0));
}

double hellinger_sim(std::span<const double> p, std::span<const double> q) {
  return 1.0 - hellinger_distance(p, q);
}

double kl_sim(std::span<const double> p, std::span<const double> q, double smoothing) {
  if (p.size() != q.size()) throw ArgumentError("kl_sim: dimension mismatch");
  double p_sum = 0.0;
  double q_sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p_sum += p[i] + smoothing;
    q_sum += q[i] + smoothing;
  }
  double value = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ps = (p[i] + smoothing) / p_sum;
    const double qs = (q[i] + smoothing) / q_sum;
    value += ps * std::log(qs / ps);
  }
  return std::min(0.0, value);
}

AlignedColumns align_columns(const TopicModel& parent_model, std::size_t parent,
                             const TopicModel& child_model, std::size_t child) {
  AlignedColumns out;
  if (parent_model.tokens == child_model.tokens) {
    out.tokens = parent_model.tokens;
    out.parent = phi_column(parent_model, parent);
    out.child = phi_column(child_model, child);
    return out;
  }
  std::set<Token> all(parent_model.tokens.begin(), parent_model.tokens.end());
  all.insert(child_model.tokens.begin(), child_model.tokens.end());
  out.tokens.assign(all.begin(), all.end());
  out.parent.reserve(all.size());
  out.child.reserve(all.size());
  for (const auto& token : out.tokens) {
    const auto pr = parent_model.token_row(token);
    const auto cr = child_model.token_row(token);
    out.parent.push_back(pr ? parent_model.phi(*pr, parent) : 0.0);
    out.child.push_back(cr ? child_model.phi(*cr, child) : 0.0);
  }
  return out;
}

double edge_measure(const std::string& measure, const TopicModel& parent_model,
                    std::size_t parent, const TopicModel& child_model, std::size_t child,
                    const EdgeResources& resources) {
  if (measure == measure::kEmbedSim || measure == measure::kCoocSim) {
    const auto parent_top = top_tokens(parent_model, parent, resources.n_top, Modality::kWord);
    const auto child_top = top_tokens(child_model, child, resources.n_top, Modality::kWord);
    if (measure == measure::kEmbedSim) {
      if (resources.embeds == nullptr) throw ArgumentError("embed_sim requires embeddings");
      return embed_sim(parent_top, child_top, *resources.embeds);
    }
    if (resources.cooc == nullptr) throw ArgumentError("cooc_sim requires co-occurrence statistics");
    return cooc_sim(parent_top, child_top, *resources.cooc, resources.cooc_epsilon);
  }
  if (measure == measure::kHellingerSim || measure == measure::kKlSim) {
    const auto aligned = align_columns(parent_model, parent, child_model, child);
    return measure == measure::kHellingerSim
               ? hellinger_sim(aligned.parent, aligned.child)
               : kl_sim(aligned.parent, aligned.child, resources.kl_smoothing);
  }
  throw ArgumentError("unknown measure '" + measure + "'");
}

EdgeScoreTable score_all(const Hierarchy& hierarchy, const std::vector<std::string>& measures,
                         const EdgeResources& resources) {
  for (const auto& name : measures) {
    check_measure_name(name);
    if (name == measure::kEmbedSim && resources.embeds == nullptr) {
      throw ArgumentError("missing resource for measure embed_sim: embeddings");
    }
    if (name == measure::kCoocSim && resources.cooc == nullptr) {
      throw ArgumentError("missing resource for measure cooc_sim: co-occurrence corpus");
    }
  }
  EdgeScoreTable table;
  table.measures = measures;
  struct Slot {
    std::size_t level;
    std::size_t parent;
    std::size_t child;
  };
  std::vector<Slot> slots;
  for (std::size_t l = 0; l + 1 < hierarchy.levels.size(); ++l) {
    const auto& parents = hierarchy.levels[l];
    const auto& children = hierarchy.levels[l + 1];
    for (std::size_t a = 0; a < parents.n_topics(); ++a) {
      for (std::size_t t = 0; t < children.n_topics(); ++t) {
        slots.push_back({l, a, t});
        table.rows.push_back(
            EdgeScoreRow{parents.topic_ids[a], children.topic_ids[t], {}, std::nullopt});
      }
    }
  }
  const auto n = static_cast<std::int64_t>(slots.size());
  const int threads = resources.threads > 0 ? resources.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const Slot& slot = slots[i];
    for (const auto& name : measures) {
      table.rows[i].scores[name] =
          edge_measure(name, hierarchy.levels[slot.level], slot.parent,
                       hierarchy.levels[slot.level + 1], slot.child, resources);
    }
  }
  return table;
}

}  // namespace topicmap
