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

#include "topicmap/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace topicmap {

std::string level_topic_prefix(std::size_t level) {
  return "l" + std::to_string(level + 1) + "_t";
}

std::optional<std::pair<std::size_t, std::size_t>> Hierarchy::locate(
    const std::string& topic_id) const {
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (const auto index = levels[l].topic_index(topic_id)) return std::make_pair(l, *index);
  }
  return std::nullopt;
}

double Hierarchy::normalized_weight(const std::string& parent, const std::string& child) const {
  const auto p = locate(parent);
  const auto c = locate(child);
  if (!p || !c || c->first != p->first + 1 || p->first >= normalized.size()) return kNaN;
  return normalized[p->first].values(static_cast<Eigen::Index>(c->second),
                                     static_cast<Eigen::Index>(p->second));
}

double reconstruction_error(const TopicModel& parent, const TopicModel& child,
                            const Eigen::MatrixXd& psi) {
  if (psi.rows() != static_cast<Eigen::Index>(child.n_topics()) ||
      psi.cols() != static_cast<Eigen::Index>(parent.n_topics())) {
    throw ArgumentError("reconstruction_error: psi dimension mismatch");
  }
  // Rows present only in one model count with zero probability in the other.
  std::set<Token> all(parent.tokens.begin(), parent.tokens.end());
  all.insert(child.tokens.begin(), child.tokens.end());
  double error = 0.0;
  for (const Token& token : all) {
    const auto prow = parent.token_row(token);
    const auto crow = child.token_row(token);
    for (Eigen::Index a = 0; a < psi.cols(); ++a) {
      const double target = prow ? parent.phi(*prow, a) : 0.0;
      double mixed = 0.0;
      if (crow) {
        for (Eigen::Index t = 0; t < psi.rows(); ++t) mixed += child.phi(*crow, t) * psi(t, a);
      }
      error += std::abs(target - mixed);
    }
  }
  return error;
}

FitLevelResult fit_level(const TopicModel& parent, std::size_t n_child_topics,
                         const CorpusSet& corpus, const TrainConfig& config, double psi_weight,
                         std::size_t parent_level) {
  if (static_cast<std::size_t>(parent.phi.rows()) != parent.tokens.size() ||
      static_cast<std::size_t>(parent.phi.cols()) != parent.n_topics()) {
    throw DataError("fit_level: parent phi dimensions do not match its token/topic lists");
  }
  if (corpus.num_documents() == 0) throw ArgumentError("fit_level: empty corpus");
  if (!(psi_weight > 0.0)) throw ArgumentError("fit_level: psi_weight must be positive");
  if (parent.n_topics() < 2) warn("fit_level: parent level has fewer than 2 topics");
  if (n_child_topics <= parent.n_topics()) {
    warn("fit_level: child level has " + std::to_string(n_child_topics) +
         " topics, not more than the parent's " + std::to_string(parent.n_topics()));
  }

  TrainConfig child_config = config;
  child_config.n_topics = n_child_topics;

  TopicModel child;
  std::set<Token> vocabulary(corpus.tokens().begin(), corpus.tokens().end());
  vocabulary.insert(parent.tokens.begin(), parent.tokens.end());
  child.tokens.assign(vocabulary.begin(), vocabulary.end());
  child.document_ids = corpus.document_ids();
  child.modality_weights = config.modality_weights;
  child.seed = config.seed;
  {
    std::vector<std::string> ids;
    const std::size_t width = std::to_string(n_child_topics > 0 ? n_child_topics - 1 : 0).size();
    for (std::size_t t = 0; t < n_child_topics; ++t) {
      std::string number = std::to_string(t);
      ids.push_back(config.topic_prefix + std::string(width - number.size(), '0') + number);
    }
    child.topic_ids = std::move(ids);
  }
  child.reindex();

  std::map<Token, std::size_t> rows;
  for (std::size_t w = 0; w < child.tokens.size(); ++w) rows.emplace(child.tokens[w], w);
  SparseCounts counts = build_counts(corpus, rows, config.modality_weights);
  double total = 0.0;
  for (double v : counts.values) total += v;
  const double scale = psi_weight * total / static_cast<double>(corpus.num_documents());

  const std::size_t n_docs = corpus.num_documents();
  const std::size_t n_parents = parent.n_topics();
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t a = 0; a < n_parents; ++a) {
    entries.clear();
    for (std::size_t w = 0; w < parent.tokens.size(); ++w) {
      const double p = parent.phi(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(a));
      if (p > 0.0) entries.emplace_back(static_cast<std::uint32_t>(rows.at(parent.tokens[w])), scale * p);
    }
    std::sort(entries.begin(), entries.end());
    counts.add_document(entries);
  }

  PhiMatrix phi = random_phi(child.tokens.size(), n_child_topics, config.seed);
  ThetaMatrix theta = ThetaMatrix::Constant(static_cast<Eigen::Index>(n_child_topics),
                                            static_cast<Eigen::Index>(n_docs + n_parents),
                                            1.0 / static_cast<double>(n_child_topics));
  FitLevelResult result;
  result.report = run_em(counts, child_config, phi, theta);

  child.phi = std::move(phi);
  child.theta = theta.leftCols(static_cast<Eigen::Index>(n_docs));
  result.psi.values = theta.rightCols(static_cast<Eigen::Index>(n_parents));
  result.psi.parent_level = parent_level;
  result.psi.child_level = parent_level + 1;
  result.psi.parent_ids = parent.topic_ids;
  result.psi.child_ids = child.topic_ids;
  result.reconstruction_error = reconstruction_error(parent, child, result.psi.values);
  result.child = std::move(child);
  return result;
}

NormalizedPsi normalize_psi(const PsiMatrix& psi) {
  NormalizedPsi out;
  out.values = Eigen::MatrixXd::Zero(psi.values.rows(), psi.values.cols());
  out.parent_level = psi.parent_level;
  out.child_level = psi.child_level;
  out.parent_ids = psi.parent_ids;
  out.child_ids = psi.child_ids;
  for (Eigen::Index a = 0; a < psi.values.cols(); ++a) {
    const double lo = psi.values.col(a).minCoeff();
    const double hi = psi.values.col(a).maxCoeff();
    if (!(hi > lo)) {
      out.degenerate_columns.push_back(static_cast<std::size_t>(a));
      const std::string name = a < static_cast<Eigen::Index>(psi.parent_ids.size())
                                   ? psi.parent_ids[a]
                                   : std::to_string(a);
      warn("normalize_psi: constant column for parent " + name + "; all weights set to 0");
      continue;
    }
    for (Eigen::Index t = 0; t < psi.values.rows(); ++t) {
      out.values(t, a) = (psi.values(t, a) - lo) / (hi - lo);
    }
  }
  return out;
}

std::vector<Edge> edges_above(const NormalizedPsi& norm, double k) {
  std::vector<Edge> edges;
  for (Eigen::Index a = 0; a < norm.values.cols(); ++a) {
    for (Eigen::Index t = 0; t < norm.values.rows(); ++t) {
      const double weight = norm.values(t, a);
      if (weight > k) edges.push_back(Edge{norm.parent_ids.at(a), norm.child_ids.at(t), weight});
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Edge> top_k_edges(const EdgeScoreTable& scores, const std::string& measure,
                              std::size_t k, const Hierarchy* hierarchy) {
  if (k == 0) throw ArgumentError("top_k_edges: k must be >= 1");
  if (!scores.has_measure(measure)) {
    throw ArgumentError("top_k_edges: score table has no measure '" + measure + "'");
  }
  struct Candidate {
    const EdgeScoreRow* row;
    double score;
  };
  std::vector<Candidate> ranked;
  for (const auto& row : scores.rows) {
    const auto it = row.scores.find(measure);
    ranked.push_back({&row, it == row.scores.end() ? kNaN : it->second});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Candidate& x, const Candidate& y) {
    const bool xn = std::isnan(x.score);
    const bool yn = std::isnan(y.score);
    if (xn != yn) return yn;
    if (!xn && x.score != y.score) return x.score > y.score;
    if (x.row->parent != y.row->parent) return x.row->parent < y.row->parent;
    return x.row->child < y.row->child;
  });
  const std::size_t take = std::min(k, ranked.size());

  // Positions into `ranked`, kept in rank order.
  std::vector<std::size_t> kept(take);
  for (std::size_t i = 0; i < take; ++i) kept[i] = i;

  std::set<std::string> children;
  for (const auto& row : scores.rows) children.insert(row.child);
  if (take < children.size()) {
    if (take < ranked.size()) {
      warn("top_k_edges: k=" + std::to_string(k) + " is below the number of child topics (" +
           std::to_string(children.size()) + "); some children lose all parents");
    }
  } else {
    std::map<std::string, std::size_t> parents_of;
    for (std::size_t pos : kept) ++parents_of[ranked[pos].row->child];
    for (const auto& orphan : children) {
      if (parents_of[orphan] > 0) continue;
      std::size_t best = ranked.size();
      for (std::size_t i = take; i < ranked.size(); ++i) {
        if (ranked[i].row->child == orphan) {
          best = i;
          break;
        }
      }
      // Drop the lowest-ranked edge whose child keeps another parent.
      for (std::size_t j = kept.size(); j-- > 0;) {
        const std::string& child = ranked[kept[j]].row->child;
        if (parents_of[child] > 1) {
          --parents_of[child];
          kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(j));
          break;
        }
      }
      kept.push_back(best);
      ++parents_of[orphan];
      std::sort(kept.begin(), kept.end());
    }
  }

  std::vector<Edge> edges;
  edges.reserve(kept.size());
  for (std::size_t pos : kept) {
    const auto* row = ranked[pos].row;
    const double weight = hierarchy != nullptr ? hierarchy->normalized_weight(row->parent, row->child)
                                               : ranked[pos].score;
    edges.push_back(Edge{row->parent, row->child, weight});
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

void HierarchyConfig::validate() const {
  if (level_topics.empty()) throw ArgumentError("hierarchy needs at least one level");
  for (std::size_t l = 0; l < level_topics.size(); ++l) {
    if (level_topics[l] == 0) throw ArgumentError("level topic counts must be positive");
    if (l > 0 && level_topics[l] <= level_topics[l - 1]) {
      throw ArgumentError("level topic counts must be strictly increasing");
    }
  }
  if (!(psi_weight > 0.0)) throw ArgumentError("psi_weight must be positive");
}

Hierarchy extend_hierarchy(TopicModel top, const CorpusSet& corpus, const HierarchyConfig& config,
                           std::vector<TrainReport>* reports) {
  Hierarchy hierarchy;
  hierarchy.levels.push_back(std::move(top));
  for (std::size_t l = 1; l < config.level_topics.size(); ++l) {
    TrainConfig train = config.train;
    train.topic_prefix = level_topic_prefix(l);
    FitLevelResult fit = fit_level(hierarchy.levels.back(), config.level_topics[l], corpus, train,
                                   config.psi_weight, l - 1);
    if (reports != nullptr) reports->push_back(fit.report);
    hierarchy.levels.push_back(std::move(fit.child));
    hierarchy.psis.push_back(std::move(fit.psi));
  }
  for (const auto& psi : hierarchy.psis) {
    hierarchy.normalized.push_back(normalize_psi(psi));
    const auto edges = edges_above(hierarchy.normalized.back(), config.edge_threshold);
    hierarchy.edges.insert(hierarchy.edges.end(), edges.begin(), edges.end());
  }
  return hierarchy;
}

HierarchyBuild build_concat(std::vector<Collection> collections, const HierarchyConfig& config) {
  config.validate();
  if (collections.empty()) throw ArgumentError("build_concat: no collections given");
  HierarchyBuild build;
  build.corpus = merge(std::move(collections));
  TrainConfig train = config.train;
  train.n_topics = config.level_topics.front();
  train.topic_prefix = level_topic_prefix(0);
  TrainResult top = topicmap::train(build.corpus, train);
  build.reports.push_back(top.report);
  build.train_sizes.push_back(build.corpus.num_documents());
  build.hierarchy = extend_hierarchy(std::move(top.model), build.corpus, config, &build.reports);
  return build;
}

HierarchyBuild build_heterogeneous(Collection base, std::vector<Collection> new_collections,
                                   const HeterogeneousConfig& hetero,
                                   const HierarchyConfig& config) {
  config.validate();
  if (base.documents.empty()) throw ArgumentError("build_heterogeneous: base collection is empty");
  if (!(hetero.batch_fraction > 0.0 && hetero.batch_fraction <= 1.0)) {
    throw ArgumentError("batch fraction must be in (0, 1]");
  }
  if (hetero.iterations && *hetero.iterations == 0) {
    throw ArgumentError("heterogeneous iterations must be >= 1");
  }

  std::vector<std::pair<std::size_t, std::size_t>> pool;
  for (std::size_t c = 0; c < new_collections.size(); ++c) {
    for (std::size_t d = 0; d < new_collections[c].documents.size(); ++d) pool.emplace_back(c, d);
  }

  TrainConfig train = config.train;
  train.n_topics = config.level_topics.front();
  train.topic_prefix = level_topic_prefix(0);

  HierarchyBuild build;
  if (pool.empty()) {
    warn("build_heterogeneous: no new documents; building from the base collection only");
    std::vector<Collection> only;
    only.push_back(std::move(base));
    return build_concat(std::move(only), config);
  }

  Rng rng(config.train.seed);
  rng.shuffle(pool);
  const auto batch_size = static_cast<std::size_t>(
      std::ceil(hetero.batch_fraction * static_cast<double>(pool.size()) - 1e-9));
  const std::size_t per_batch = std::max<std::size_t>(batch_size, 1);
  const std::size_t iterations =
      hetero.iterations.value_or((pool.size() + per_batch - 1) / per_batch);

  CorpusSet current = merge({base});
  TrainResult model = topicmap::train(current, train);
  build.reports.push_back(model.report);
  build.train_sizes.push_back(current.num_documents());

  std::vector<std::vector<std::size_t>> selected(new_collections.size());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < iterations; ++i) {
    const std::size_t end = std::min(pool.size(), cursor + per_batch);
    for (; cursor < end; ++cursor) selected[pool[cursor].first].push_back(pool[cursor].second);

    std::vector<Collection> parts;
    parts.push_back(base);
    for (std::size_t c = 0; c < new_collections.size(); ++c) {
      if (selected[c].empty()) continue;
      std::vector<std::size_t> indices = selected[c];
      std::sort(indices.begin(), indices.end());
      parts.push_back(new_collections[c].subset(indices));
    }
    current = merge(std::move(parts));
    const TopicModel previous = std::move(model.model);
    model = topicmap::train(current, train, WarmStart{&previous});
    build.reports.push_back(model.report);
    build.train_sizes.push_back(current.num_documents());
  }

  build.corpus = std::move(current);
  build.hierarchy = extend_hierarchy(std::move(model.model), build.corpus, config, &build.reports);
  return build;
}

}  // namespace topicmap
