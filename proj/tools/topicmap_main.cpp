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

// topicmap command-line tool.

#include <cmath>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "topicmap/artm.hpp"
#include "topicmap/common.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/edge_quality.hpp"
#include "topicmap/flat_quality.hpp"
#include "topicmap/hier_quality.hpp"
#include "topicmap/hierarchy.hpp"
#include "topicmap/map_export.hpp"
#include "topicmap/model_io.hpp"
#include "topicmap/service.hpp"
#include "topicmap/spectre.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace topicmap;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
};

// "path" or "id=path"; the id defaults to the file stem.
Collection load_collection(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq != std::string::npos) return ingest(spec.substr(eq + 1), spec.substr(0, eq));
  return ingest(spec, fs::path(spec).stem().string());
}

std::vector<Collection> load_collections(const std::vector<std::string>& specs) {
  std::vector<Collection> out;
  for (const auto& spec : specs) out.push_back(load_collection(spec));
  return out;
}

std::vector<std::string> collection_ids(const CorpusSet& corpus) {
  std::vector<std::string> ids;
  for (const auto& c : corpus.collections()) ids.push_back(c.id);
  return ids;
}

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    write_text_file(path, contents);
  }
}

std::string json_text(const json& value) { return value.dump(2) + "\n"; }

json report_json(const TrainReport& report) {
  return {{"log_likelihood", report.log_likelihood},
          {"iterations", report.iterations},
          {"converged", report.converged}};
}

struct TrainFlags {
  std::size_t iterations = 50;
  double tolerance = 1e-4;
  double word_weight = 1.0;
  double tag_weight = 1.0;
  double smooth_tau = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double decorrelation_tau = 0.0;
  std::string kernel = "parallel";

  void add(CLI::App* app) {
    app->add_option("--iterations", iterations, "Maximum EM iterations")->capture_default_str();
    app->add_option("--tolerance", tolerance, "Relative log-likelihood stopping tolerance")
        ->capture_default_str();
    app->add_option("--word-weight", word_weight, "Likelihood weight of the word modality")
        ->capture_default_str();
    app->add_option("--tag-weight", tag_weight, "Likelihood weight of the tag modality")
        ->capture_default_str();
    app->add_option("--dirichlet-tau", smooth_tau, "Dirichlet smoothing/sparsing strength (0 = off)");
    app->add_option("--alpha", alpha, "Dirichlet alpha for theta")->capture_default_str();
    app->add_option("--beta", beta, "Dirichlet beta for phi")->capture_default_str();
    app->add_option("--decorrelation-tau", decorrelation_tau, "Topic decorrelation strength (0 = off)");
    app->add_option("--kernel", kernel, "E-step kernel")
        ->check(CLI::IsMember({"parallel", "reference"}))
        ->capture_default_str();
  }

  TrainConfig config(const Globals& globals) const {
    TrainConfig c;
    c.max_iterations = iterations;
    c.ll_rel_tolerance = tolerance;
    c.modality_weights = {{Modality::kWord, word_weight}, {Modality::kTag, tag_weight}};
    c.seed = globals.seed;
    c.threads = globals.threads;
    c.kernel = kernel == "reference" ? EStepKernel::kReference : EStepKernel::kParallel;
    if (smooth_tau != 0.0) {
      c.regularizers.push_back({RegularizerKind::kDirichletSmoothSparse, smooth_tau, {alpha}, {beta}});
    }
    if (decorrelation_tau != 0.0) {
      c.regularizers.push_back({RegularizerKind::kDecorrelation, decorrelation_tau, {1.0}, {1.0}});
    }
    return c;
  }

  json to_json() const {
    return {{"iterations", iterations},       {"tolerance", tolerance},
            {"word_weight", word_weight},     {"tag_weight", tag_weight},
            {"dirichlet_tau", smooth_tau},    {"alpha", alpha},
            {"beta", beta},                   {"decorrelation_tau", decorrelation_tau}};
  }
};

std::optional<EmbeddingStore> maybe_embeddings(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return EmbeddingStore::load(path);
}

// Co-occurrence corpus: explicit files, else the hierarchy's own corpus.
CorpusSet cooc_corpus(const std::vector<std::string>& specs, const fs::path& hier_dir) {
  if (!specs.empty()) return merge(load_collections(specs));
  HierarchyMeta meta;
  const json info = read_json_file(hier_dir / "hierarchy.json");
  meta.collection_ids = info.value("collection_ids", std::vector<std::string>{});
  return load_corpus(hier_dir / "corpus", meta.collection_ids);
}

std::size_t psi_index(const Hierarchy& hierarchy, std::size_t level_pair) {
  if (level_pair == 0 || level_pair > hierarchy.normalized.size()) {
    throw ArgumentError(fmt::format("--level-pair must be in 1..{}", hierarchy.normalized.size()));
  }
  return level_pair - 1;
}

std::size_t child_count(const Hierarchy& hierarchy, std::size_t pair) {
  return hierarchy.levels.at(pair + 1).n_topics();
}

HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topicmap: hierarchical topic maps over heterogeneous collections"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Config file (TOML/INI); command-line flags win");
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (0 = all cores)")->capture_default_str();

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a corpus file and write it normalized");
  std::string ingest_input, ingest_collection, ingest_out, ingest_stats;
  ingest_cmd->add_option("--input", ingest_input, "Bag-of-words corpus file")->required();
  ingest_cmd->add_option("--collection", ingest_collection, "Collection id (default: file stem)");
  ingest_cmd->add_option("--out", ingest_out, "Normalized corpus output");
  ingest_cmd->add_option("--stats", ingest_stats, "Summary JSON output (default: stdout)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train one flat topic model");
  std::vector<std::string> train_corpus;
  std::size_t train_topics = 0;
  std::string train_out;
  TrainFlags train_flags;
  train_cmd->add_option("--corpus", train_corpus, "Corpus files (path or id=path)")->required();
  train_cmd->add_option("--topics", train_topics, "Number of topics")->required();
  train_cmd->add_option("--out", train_out, "Model directory")->required();
  train_flags.add(train_cmd);

  // hier
  auto* hier_cmd = app.add_subcommand("hier", "Build a hierarchical model");
  std::string hier_algo = "concat", hier_out, hier_base, hier_sidecar;
  std::vector<std::string> hier_corpus, hier_new;
  std::vector<std::size_t> hier_levels{5, 12};
  double hier_fraction = 0.1, hier_psi_weight = 1.0, hier_threshold = 0.5;
  std::size_t hier_meta_iterations = 0;
  TrainFlags hier_flags;
  hier_cmd->add_option("--algo", hier_algo, "Meta-algorithm")
      ->check(CLI::IsMember({"concat", "heterogeneous"}))
      ->capture_default_str();
  hier_cmd->add_option("--corpus", hier_corpus, "concat: corpus files (path or id=path)");
  hier_cmd->add_option("--base", hier_base, "heterogeneous: base collection");
  hier_cmd->add_option("--new", hier_new, "heterogeneous: new collections");
  hier_cmd->add_option("--batch-fraction", hier_fraction, "heterogeneous: batch size as a pool fraction")
      ->capture_default_str();
  hier_cmd->add_option("--meta-iterations", hier_meta_iterations,
                       "heterogeneous: number of batches (default: exhaust the pool)");
  hier_cmd->add_option("--levels", hier_levels, "Topics per level, e.g. 5,12")->delimiter(',');
  hier_cmd->add_option("--psi-weight", hier_psi_weight, "Weight of parent pseudo-documents")
      ->capture_default_str();
  hier_cmd->add_option("--threshold", hier_threshold, "Normalized psi edge threshold")->capture_default_str();
  hier_cmd->add_option("--sidecar", hier_sidecar, "JSON-lines document metadata to bundle");
  hier_cmd->add_option("--out", hier_out, "Hierarchy directory")->required();
  hier_flags.add(hier_cmd);

  // eval-flat
  auto* flat_cmd = app.add_subcommand("eval-flat", "Flat topic quality of one level");
  std::string flat_model, flat_hier, flat_embeddings, flat_out, flat_json;
  std::size_t flat_level = 1, flat_top = 10;
  std::vector<std::string> flat_cooc;
  flat_cmd->add_option("--model", flat_model, "Model directory");
  flat_cmd->add_option("--hier", flat_hier, "Hierarchy directory (with --level)");
  flat_cmd->add_option("--level", flat_level, "Hierarchy level (1-based)")->capture_default_str();
  flat_cmd->add_option("--cooc-corpus", flat_cooc, "Co-occurrence corpus files (default: hierarchy corpus)");
  flat_cmd->add_option("--embeddings", flat_embeddings, "Word vectors (text format)");
  flat_cmd->add_option("--n-top", flat_top, "Top tokens per topic")->capture_default_str();
  flat_cmd->add_option("--out", flat_out, "TSV output (default: stdout)");
  flat_cmd->add_option("--json", flat_json, "JSON output");

  // eval-edges
  auto* edges_cmd = app.add_subcommand("eval-edges", "Score every candidate edge of a hierarchy");
  std::string edges_hier, edges_embeddings, edges_out;
  std::vector<std::string> edges_measures, edges_cooc;
  std::size_t edges_top = 10;
  edges_cmd->add_option("--hier", edges_hier, "Hierarchy directory")->required();
  edges_cmd->add_option("--measures", edges_measures, "Measures (default: all with resources)")
      ->delimiter(',')
      ->check(CLI::IsMember(all_measure_names()));
  edges_cmd->add_option("--embeddings", edges_embeddings, "Word vectors (text format)");
  edges_cmd->add_option("--cooc-corpus", edges_cooc, "Co-occurrence corpus files (default: hierarchy corpus)");
  edges_cmd->add_option("--n-top", edges_top, "Top tokens per topic")->capture_default_str();
  edges_cmd->add_option("--out", edges_out, "TSV output (default: <hier>/edge_scores.tsv)");

  // eval-hier
  auto* hq_cmd = app.add_subcommand("eval-hier", "Averaging or ranking quality curves");
  std::string hq_hier, hq_scores, hq_style = "averaging", hq_measure, hq_out;
  std::size_t hq_pair = 1, hq_kmax = 0;
  hq_cmd->add_option("--hier", hq_hier, "Hierarchy directory")->required();
  hq_cmd->add_option("--scores", hq_scores, "Edge scores TSV (default: <hier>/edge_scores.tsv)");
  hq_cmd->add_option("--style", hq_style, "Curve style")
      ->check(CLI::IsMember({"averaging", "ranking"}))
      ->capture_default_str();
  hq_cmd->add_option("--measure", hq_measure, "Edge measure")->required()->check(CLI::IsMember(all_measure_names()));
  hq_cmd->add_option("--level-pair", hq_pair, "Adjacent level pair (1 = levels 1-2)")->capture_default_str();
  hq_cmd->add_option("--k-max", hq_kmax, "ranking: largest k (default: all candidates)");
  hq_cmd->add_option("--out-dir", hq_out, "Directory for k,value CSV files")->required();

  // assess
  auto* assess_cmd = app.add_subcommand("assess", "Aggregate assessor votes; ROC-AUC of measures");
  std::string assess_votes, assess_labels, assess_scores, assess_out;
  assess_cmd->add_option("--votes", assess_votes, "Votes CSV parent,child,vote")->required();
  assess_cmd->add_option("--labels-out", assess_labels, "Labels CSV output");
  assess_cmd->add_option("--scores", assess_scores, "Edge scores TSV for ROC-AUC");
  assess_cmd->add_option("--out", assess_out, "Report JSON (default: stdout)");

  // prune
  auto* prune_cmd = app.add_subcommand("prune", "Keep the top-k edges by a measure");
  std::string prune_hier, prune_scores, prune_measure, prune_out;
  std::size_t prune_k = 0, prune_pair = 1;
  prune_cmd->add_option("--hier", prune_hier, "Hierarchy directory")->required();
  prune_cmd->add_option("--scores", prune_scores, "Edge scores TSV (default: <hier>/edge_scores.tsv)");
  prune_cmd->add_option("--measure", prune_measure, "Edge measure")->required()->check(CLI::IsMember(all_measure_names()));
  prune_cmd->add_option("--k", prune_k, "Edges to keep (default: InverseDP-optimal k)");
  prune_cmd->add_option("--level-pair", prune_pair, "Level pair used to choose the default k")->capture_default_str();
  prune_cmd->add_option("--out", prune_out, "Output hierarchy directory")->required();

  // spectre
  auto* spectre_cmd = app.add_subcommand("spectre", "Order the topics of a level along a linear spectre");
  std::string spectre_hier, spectre_metric = "hellinger", spectre_mode = "auto", spectre_out;
  std::size_t spectre_level = 1;
  spectre_cmd->add_option("--hier", spectre_hier, "Hierarchy directory")->required();
  spectre_cmd->add_option("--level", spectre_level, "Level (1-based)")->capture_default_str();
  spectre_cmd->add_option("--metric", spectre_metric, "Topic distance")
      ->check(CLI::IsMember({"hellinger", "jensen_shannon"}))
      ->capture_default_str();
  spectre_cmd->add_option("--mode", spectre_mode, "Solver (auto = exact up to 10 topics)")
      ->check(CLI::IsMember({"auto", "exact", "heuristic"}))
      ->capture_default_str();
  spectre_cmd->add_option("--out", spectre_out, "Output JSON (default: <hier>/spectre.json)");

  // export-map
  auto* export_cmd = app.add_subcommand("export-map", "Write map.json for the service");
  std::string export_hier, export_spectre, export_sidecar, export_out;
  std::size_t export_docs = 10;
  export_cmd->add_option("--hier", export_hier, "Hierarchy directory")->required();
  export_cmd->add_option("--spectre", export_spectre, "Spectre JSON (default: <hier>/spectre.json)");
  export_cmd->add_option("--docs-per-topic", export_docs, "Documents listed per topic")->capture_default_str();
  export_cmd->add_option("--sidecar", export_sidecar, "JSON-lines document metadata");
  export_cmd->add_option("--out", export_out, "Output (default: <hier>/map.json)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  std::string serve_dir, serve_host = "127.0.0.1", serve_map, serve_sidecar;
  int serve_port = 8080;
  serve_cmd->add_option("--model-dir", serve_dir, "Hierarchy directory with map.json")
      ->required();
  serve_cmd->add_option("--port", serve_port, "TCP port")->capture_default_str();
  serve_cmd->add_option("--host", serve_host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--map", serve_map, "map.json (default: <model-dir>/map.json)");
  serve_cmd->add_option("--sidecar", serve_sidecar, "JSON-lines document metadata");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest_cmd) {
      const std::string id =
          ingest_collection.empty() ? fs::path(ingest_input).stem().string() : ingest_collection;
      const Collection collection = ingest(ingest_input, id);
      if (!ingest_out.empty()) {
        std::ostringstream out;
        write_collection(collection, out);
        write_text_file(ingest_out, out.str());
      }
      std::uint64_t tokens = 0;
      for (const auto& doc : collection.documents) tokens += doc.length;
      write_output(ingest_stats, json_text({{"collection", collection.id},
                                            {"documents", collection.documents.size()},
                                            {"tokens", tokens},
                                            {"vocabulary_words", collection.vocabulary_size(Modality::kWord)},
                                            {"vocabulary_tags", collection.vocabulary_size(Modality::kTag)}}));
    } else if (*train_cmd) {
      const CorpusSet corpus = merge(load_collections(train_corpus));
      TrainConfig config = train_flags.config(globals);
      config.n_topics = train_topics;
      const TrainResult result = train(corpus, config);
      json config_json = train_flags.to_json();
      config_json["topics"] = train_topics;
      save_model(result.model, train_out, {collection_ids(corpus), config_json});
      write_text_file(fs::path(train_out) / "report.json", json_text(report_json(result.report)));
    } else if (*hier_cmd) {
      HierarchyConfig config;
      config.level_topics = hier_levels;
      config.train = hier_flags.config(globals);
      config.psi_weight = hier_psi_weight;
      config.edge_threshold = hier_threshold;
      HierarchyBuild build;
      if (hier_algo == "concat") {
        if (hier_corpus.empty()) throw ArgumentError("hier --algo concat needs --corpus");
        build = build_concat(load_collections(hier_corpus), config);
      } else {
        if (hier_base.empty()) throw ArgumentError("hier --algo heterogeneous needs --base");
        HeterogeneousConfig hetero;
        hetero.batch_fraction = hier_fraction;
        if (hier_meta_iterations > 0) hetero.iterations = hier_meta_iterations;
        build = build_heterogeneous(load_collection(hier_base), load_collections(hier_new), hetero, config);
      }
      json config_json = hier_flags.to_json();
      config_json["algo"] = hier_algo;
      config_json["levels"] = hier_levels;
      config_json["psi_weight"] = hier_psi_weight;
      config_json["threshold"] = hier_threshold;
      config_json["seed"] = globals.seed;
      if (hier_algo == "heterogeneous") config_json["batch_fraction"] = hier_fraction;
      save_hierarchy(build.hierarchy, hier_out, {collection_ids(build.corpus), config_json});
      save_corpus(build.corpus, fs::path(hier_out) / "corpus");
      if (!hier_sidecar.empty()) {
        write_text_file(fs::path(hier_out) / "documents.jsonl", read_text_file(hier_sidecar));
      }
      json reports = json::array();
      for (const auto& report : build.reports) reports.push_back(report_json(report));
      write_text_file(fs::path(hier_out) / "report.json",
                      json_text({{"train_reports", reports}, {"train_sizes", build.train_sizes}}));
    } else if (*flat_cmd) {
      if (flat_model.empty() == flat_hier.empty()) throw ArgumentError("eval-flat needs exactly one of --model, --hier");
      TopicModel model;
      CorpusSet corpus;
      if (!flat_model.empty()) {
        model = load_model(flat_model);
        if (flat_cooc.empty()) throw ArgumentError("eval-flat --model needs --cooc-corpus");
        corpus = merge(load_collections(flat_cooc));
      } else {
        const Hierarchy hierarchy = load_hierarchy(flat_hier);
        if (flat_level == 0 || flat_level > hierarchy.levels.size()) {
          throw ArgumentError(fmt::format("--level must be in 1..{}", hierarchy.levels.size()));
        }
        model = hierarchy.levels[flat_level - 1];
        corpus = cooc_corpus(flat_cooc, flat_hier);
      }
      const CoocStats cooc(corpus, globals.threads);
      const auto embeds = maybe_embeddings(flat_embeddings);
      const FlatScoreReport report = score_flat(model, cooc, embeds ? &*embeds : nullptr, flat_top);
      std::ostringstream tsv;
      report.write_tsv(tsv);
      write_output(flat_out, tsv.str());
      if (!flat_json.empty()) write_text_file(flat_json, json_text(report.to_json()));
    } else if (*edges_cmd) {
      const Hierarchy hierarchy = load_hierarchy(edges_hier);
      const auto embeds = maybe_embeddings(edges_embeddings);
      const CorpusSet corpus = cooc_corpus(edges_cooc, edges_hier);
      const CoocStats cooc(corpus, globals.threads);
      std::vector<std::string> measures = edges_measures;
      if (measures.empty()) {
        for (const auto& name : all_measure_names()) {
          if (name == measure::kEmbedSim && !embeds) continue;
          measures.push_back(name);
        }
      }
      EdgeResources resources;
      resources.embeds = embeds ? &*embeds : nullptr;
      resources.cooc = &cooc;
      resources.n_top = edges_top;
      resources.threads = globals.threads;
      const EdgeScoreTable table = score_all(hierarchy, measures, resources);
      std::ostringstream tsv;
      table.write_tsv(tsv);
      write_output(edges_out.empty() ? (fs::path(edges_hier) / "edge_scores.tsv").string() : edges_out, tsv.str());
    } else if (*hq_cmd) {
      const Hierarchy hierarchy = load_hierarchy(hq_hier);
      std::istringstream input(
          read_text_file(hq_scores.empty() ? fs::path(hq_hier) / "edge_scores.tsv" : fs::path(hq_scores)));
      const EdgeScoreTable scores = EdgeScoreTable::read_tsv(input);
      const NormalizedPsi& norm = hierarchy.normalized.at(psi_index(hierarchy, hq_pair));
      const fs::path out(hq_out);
      if (hq_style == "averaging") {
        std::string csv = "k,value\n";
        for (const auto& [k, value] : avg_quality_curve(scores, norm, hq_measure, default_threshold_grid())) {
          csv += fmt::format("{:.2f},{}\n", k, format_real(value));
        }
        write_text_file(out / "averaging.csv", csv);
      } else {
        const auto candidates = static_cast<std::size_t>(norm.values.size());
        const auto curve = ranking_curve(scores, hq_measure, norm, hq_kmax == 0 ? candidates : hq_kmax);
        std::string ap = "k,value\n", ndcg = "k,value\n", idp = "k,value\n";
        for (const auto& point : curve) {
          ap += fmt::format("{},{}\n", point.k, format_real(point.average_precision));
          ndcg += fmt::format("{},{}\n", point.k, format_real(point.ndcg));
          idp += fmt::format("{},{}\n", point.k, format_real(point.inverse_dp));
        }
        write_text_file(out / "ap.csv", ap);
        write_text_file(out / "ndcg.csv", ndcg);
        write_text_file(out / "inverse_dp.csv", idp);
      }
    } else if (*assess_cmd) {
      std::istringstream votes_input(read_text_file(assess_votes));
      const VoteAggregation aggregation = aggregate_votes(AssessorVotes::read_csv(votes_input));
      if (!assess_labels.empty()) {
        std::ostringstream labels;
        write_labels_csv(aggregation.edges, labels);
        write_text_file(assess_labels, labels.str());
      }
      json histogram = json::object();
      for (const auto& [size, count] : aggregation.agreement_histogram) histogram[std::to_string(size)] = count;
      std::size_t positives = 0;
      for (const auto& edge : aggregation.edges) positives += edge.label == 1 ? 1 : 0;
      json report = {{"edges", aggregation.edges.size()},
                     {"positive", positives},
                     {"negative", aggregation.edges.size() - positives},
                     {"agreement_histogram", histogram}};
      if (!assess_scores.empty()) {
        std::istringstream input(read_text_file(assess_scores));
        const EdgeScoreTable scores = EdgeScoreTable::read_tsv(input);
        json auc = json::object();
        for (const auto& name : scores.measures) {
          std::vector<double> values;
          std::vector<int> labels;
          std::size_t skipped = 0;
          for (const auto& edge : aggregation.edges) {
            const double value = scores.score(edge.parent, edge.child, name);
            if (std::isnan(value)) {
              ++skipped;
              continue;
            }
            values.push_back(value);
            labels.push_back(edge.label);
          }
          if (skipped > 0) warn(fmt::format("assess: {} labeled edges lack a {} score", skipped, name));
          try {
            auc[name] = roc_auc(values, labels);
          } catch (const ArgumentError& e) {
            warn(fmt::format("assess: no ROC-AUC for {}: {}", name, e.what()));
            auc[name] = nullptr;
          }
        }
        report["roc_auc"] = auc;
      }
      write_output(assess_out, json_text(report));
    } else if (*prune_cmd) {
      HierarchyMeta meta;
      Hierarchy hierarchy = load_hierarchy(prune_hier, &meta);
      std::istringstream input(
          read_text_file(prune_scores.empty() ? fs::path(prune_hier) / "edge_scores.tsv" : fs::path(prune_scores)));
      const EdgeScoreTable scores = EdgeScoreTable::read_tsv(input);
      std::size_t k = prune_k;
      if (k == 0) {
        const std::size_t pair = psi_index(hierarchy, prune_pair);
        const NormalizedPsi& norm = hierarchy.normalized[pair];
        const auto curve = ranking_curve(scores, prune_measure, norm, static_cast<std::size_t>(norm.values.size()));
        k = best_inverse_dp_k(curve, child_count(hierarchy, pair));
      }
      hierarchy.edges = top_k_edges(scores, prune_measure, k, &hierarchy);
      meta.config["pruned"] = {{"measure", prune_measure}, {"k", k}};
      save_hierarchy(hierarchy, prune_out, meta, &scores);
      const CorpusSet corpus = load_corpus(fs::path(prune_hier) / "corpus", meta.collection_ids);
      save_corpus(corpus, fs::path(prune_out) / "corpus");
      const fs::path sidecar = fs::path(prune_hier) / "documents.jsonl";
      if (fs::exists(sidecar)) write_text_file(fs::path(prune_out) / "documents.jsonl", read_text_file(sidecar));
      std::ostringstream tsv;
      scores.write_tsv(tsv);
      write_text_file(fs::path(prune_out) / "edge_scores.tsv", tsv.str());
      std::cout << json_text({{"k", k}, {"edges", hierarchy.edges.size()}, {"measure", prune_measure}});
    } else if (*spectre_cmd) {
      const Hierarchy hierarchy = load_hierarchy(spectre_hier);
      if (spectre_level == 0 || spectre_level > hierarchy.levels.size()) {
        throw ArgumentError(fmt::format("--level must be in 1..{}", hierarchy.levels.size()));
      }
      const TopicModel& model = hierarchy.levels[spectre_level - 1];
      const SpectreMetric metric = parse_spectre_metric(spectre_metric);
      const SpectreMode mode = spectre_mode == "auto"
                                   ? (model.n_topics() <= kMaxExactSpectreTopics ? SpectreMode::kExact
                                                                                 : SpectreMode::kHeuristic)
                                   : parse_spectre_mode(spectre_mode);
      const Spectre spectre = solve_spectre(topic_distances(model, metric), mode, globals.threads);
      json out = spectre_to_json(spectre, model, metric);
      out["level"] = spectre_level;
      write_output(spectre_out.empty() ? (fs::path(spectre_hier) / "spectre.json").string() : spectre_out,
                   json_text(out));
    } else if (*export_cmd) {
      HierarchyMeta meta;
      const Hierarchy hierarchy = load_hierarchy(export_hier, &meta);
      const CorpusSet corpus = load_corpus(fs::path(export_hier) / "corpus", meta.collection_ids);
      const json spectre_json = read_json_file(export_spectre.empty() ? fs::path(export_hier) / "spectre.json"
                                                                      : fs::path(export_spectre));
      Spectre spectre;
      try {
        if (spectre_json.value("level", 1) != 1) throw DataError("spectre must cover level 1");
        for (const auto& id : spectre_json.at("order")) {
          const auto index = hierarchy.levels.front().topic_index(id.get<std::string>());
          if (!index) throw DataError("spectre names unknown topic " + id.get<std::string>());
          spectre.order.push_back(*index);
        }
        spectre.weight = spectre_json.at("weight").get<double>();
      } catch (const json::exception& e) {
        throw DataError(std::string("spectre.json: ") + e.what());
      }
      std::optional<std::map<std::string, RawDocument>> sidecar;
      const fs::path bundled = fs::path(export_hier) / "documents.jsonl";
      if (!export_sidecar.empty()) {
        sidecar = load_sidecar(export_sidecar);
      } else if (fs::exists(bundled)) {
        sidecar = load_sidecar(bundled);
      }
      const MapExport map = export_map(hierarchy, spectre, corpus, export_docs, sidecar ? &*sidecar : nullptr);
      write_output(export_out.empty() ? (fs::path(export_hier) / "map.json").string() : export_out, map.dump());
    } else if (*serve_cmd) {
      Service service;
      HttpServer server(service);
      const int port = server.bind(serve_host, serve_port);
      ServiceOptions options{serve_dir, {}, {}};
      if (!serve_map.empty()) options.map_path = serve_map;
      if (!serve_sidecar.empty()) options.sidecar_path = serve_sidecar;
      std::thread loader([&service, options] {
        try {
          service.publish(load_service_state(options));
          std::cerr << "model loaded\n";
        } catch (const std::exception& e) {
          std::cerr << "error: " << e.what() << '\n';
          std::exit(kExitData);
        }
      });
      std::cerr << fmt::format("listening on http://{}:{}\n", serve_host, port);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      server.listen();
      loader.join();
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
