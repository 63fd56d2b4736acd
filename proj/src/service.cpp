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

#include "topicmap/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "httplib.h"
#include "json.hpp"
#include "topicmap/common.hpp"
#include "topicmap/edge_quality.hpp"
#include "topicmap/hierarchy.hpp"
#include "topicmap/model_io.hpp"

namespace topicmap {

namespace {

using nlohmann::json;

ApiResponse json_response(int status, const json& body) {
  return ApiResponse{status, body.dump() + "\n", "application/json"};
}

ApiResponse error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto part = path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return parts;
}

std::optional<std::size_t> parse_count(const std::string& text) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::string lowercase(std::string text) {
  for (char& c : text) {
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return text;
}

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<double> theta_column(const TopicModel& model, std::size_t column) {
  std::vector<double> out(model.n_topics());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = model.theta(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(column));
  }
  return out;
}

// Topic weights of free text under the top-level model, plus highlight
// and count fields shared by search and upload.
json topic_response(const ServiceState& state, const std::vector<std::string>& words,
                    const std::vector<std::size_t>* matched) {
  std::map<Token, double> counts;
  std::vector<std::string> oov;
  for (const auto& word : words) {
    Token token{word, Modality::kWord};
    if (state.top.token_row(token)) {
      counts[token] += 1.0;
    } else if (std::find(oov.begin(), oov.end(), word) == oov.end()) {
      oov.push_back(word);
    }
  }
  std::vector<double> weights(state.top.n_topics(), 0.0);
  if (!counts.empty()) {
    const std::vector<std::pair<Token, double>> bag(counts.begin(), counts.end());
    weights = fold_in(state.top, bag, kServiceFoldInIterations);
  }

  std::set<std::string> matched_ids;
  if (matched != nullptr) {
    for (std::size_t index : *matched) matched_ids.insert(state.corpus.document(index).id);
  }

  std::vector<std::size_t> ranked;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    if (weights[t] >= kMinHighlightWeight) ranked.push_back(t);
  }
  std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return state.top.topic_ids[a] < state.top.topic_ids[b];
  });
  if (ranked.size() > kMaxHighlights) ranked.resize(kMaxHighlights);

  json topics = json::array();
  for (const auto& id : state.level_topics(1)) {
    const std::size_t t = *state.top.topic_index(id);
    std::size_t count = 0;
    json docs = json::array();
    const auto it = state.map.documents.find(id);
    if (it != state.map.documents.end()) {
      for (const auto& doc : it->second) {
        if (matched_ids.count(doc.id) != 0) {
          ++count;
          docs.push_back(doc.id);
        }
      }
    }
    topics.push_back({{"id", id}, {"weight", weights[t]}, {"count", count}, {"matched_documents", docs}});
  }
  json highlighted = json::array();
  for (std::size_t t : ranked) highlighted.push_back(state.top.topic_ids[t]);
  return {{"oov", counts.empty()},
          {"oov_tokens", oov},
          {"topics", topics},
          {"highlighted", highlighted},
          {"matched_documents", std::vector<std::string>(matched_ids.begin(), matched_ids.end())}};
}

ApiResponse handle_search(const ServiceState& state, const ApiRequest& request) {
  const auto it = request.query.find("q");
  const auto words = tokenize_text(it == request.query.end() ? "" : it->second);
  if (words.empty()) return error_response(400, "empty query");
  std::optional<std::vector<std::size_t>> matched;
  for (const auto& word : words) {
    const auto postings = state.inverted_index.find(word);
    const std::vector<std::size_t> docs =
        postings == state.inverted_index.end() ? std::vector<std::size_t>{} : postings->second;
    matched = matched ? intersect(*matched, docs) : docs;
  }
  json body = topic_response(state, words, &*matched);
  body["query"] = it->second;
  return json_response(200, body);
}

ApiResponse handle_upload(const ServiceState& state, const ApiRequest& request) {
  if (request.body.size() > kMaxUploadBytes) return error_response(413, "upload exceeds 1 MiB");
  if (request.body.find_first_not_of(" \t\r\n") == std::string::npos) {
    return error_response(400, "empty upload");
  }
  if (!valid_utf8(request.body)) return error_response(422, "upload is not valid UTF-8 text");
  json body = topic_response(state, tokenize_text(request.body), nullptr);
  if (body["oov"].get<bool>()) return error_response(422, "upload shares no tokens with the model");
  return json_response(200, body);
}

ApiResponse handle_document(const ServiceState& state, const std::string& id) {
  const auto corpus_index = state.corpus.document_index(id);
  const auto raw = state.sidecar.find(id);
  if (!corpus_index && raw == state.sidecar.end()) return error_response(404, "unknown document '" + id + "'");

  json page = {{"id", id}, {"title", id}, {"author", ""}, {"collection", ""}, {"text", ""}};
  json tags = json::array();
  if (corpus_index) {
    const Document& doc = state.corpus.document(*corpus_index);
    page["collection"] = doc.collection_id;
    if (doc.title) page["title"] = *doc.title;
    if (doc.raw_text) page["text"] = *doc.raw_text;
    for (const auto& [token, count] : doc.counts) {
      if (token.modality == Modality::kTag) tags.push_back(token.surface);
    }
  }
  if (raw != state.sidecar.end()) {
    const RawDocument& r = raw->second;
    if (!r.title.empty()) page["title"] = r.title;
    if (!r.collection.empty()) page["collection"] = r.collection;
    page["author"] = r.author;
    page["text"] = r.text;
    if (!r.tags.empty()) tags = r.tags;
  }
  page["tags"] = tags;

  json suggested = json::array();
  json similar = json::array();
  if (const auto column = state.leaf.document_column(id)) {
    const auto theta = theta_column(state.leaf, *column);
    std::vector<std::pair<double, std::string>> tag_scores;
    for (std::size_t w = 0; w < state.leaf.tokens.size(); ++w) {
      if (state.leaf.tokens[w].modality != Modality::kTag) continue;
      double p = 0.0;
      for (std::size_t t = 0; t < theta.size(); ++t) {
        p += state.leaf.phi(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(t)) * theta[t];
      }
      if (p > 0.0) tag_scores.emplace_back(p, state.leaf.tokens[w].surface);
    }
    std::sort(tag_scores.begin(), tag_scores.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < std::min(kMaxSuggestions, tag_scores.size()); ++i) {
      suggested.push_back({{"tag", tag_scores[i].second}, {"weight", tag_scores[i].first}});
    }

    std::vector<std::pair<double, std::string>> neighbours;
    for (std::size_t d = 0; d < state.leaf.document_ids.size(); ++d) {
      if (d == *column) continue;
      const auto other = theta_column(state.leaf, d);
      neighbours.emplace_back(hellinger_sim(theta, other), state.leaf.document_ids[d]);
    }
    std::sort(neighbours.begin(), neighbours.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < std::min(kMaxSuggestions, neighbours.size()); ++i) {
      const auto& other_id = neighbours[i].second;
      std::string title = other_id;
      if (const auto index = state.corpus.document_index(other_id)) {
        title = state.corpus.document(*index).title.value_or(other_id);
      }
      if (const auto s = state.sidecar.find(other_id); s != state.sidecar.end() && !s->second.title.empty()) {
        title = s->second.title;
      }
      similar.push_back({{"id", other_id}, {"title", title}, {"similarity", neighbours[i].first}});
    }
  }
  page["suggested_tags"] = suggested;
  page["similar_docs"] = similar;
  return json_response(200, page);
}

ApiResponse handle_topic_documents(const ServiceState& state, const std::string& level_text,
                                   const std::string& topic, const ApiRequest& request) {
  const auto level = parse_count(level_text);
  if (!level || *level == 0) return error_response(400, "bad level '" + level_text + "'");
  const auto topic_entry = state.map.topics.find(topic);
  if (topic_entry == state.map.topics.end() || topic_entry->second.level != *level) {
    return error_response(404, "unknown topic '" + topic + "' at level " + level_text);
  }
  std::size_t offset = 0;
  std::size_t limit = kDefaultPageSize;
  for (auto [name, target] : {std::pair{"offset", &offset}, std::pair{"limit", &limit}}) {
    const auto it = request.query.find(name);
    if (it == request.query.end()) continue;
    const auto value = parse_count(it->second);
    if (!value) return error_response(400, std::string("bad ") + name + " '" + it->second + "'");
    *target = *value;
  }
  json docs = json::array();
  for (const auto& doc : paginate_topic_docs(state.map, topic, offset, limit)) {
    docs.push_back({{"id", doc.id}, {"title", doc.title}, {"collection_id", doc.collection_id},
                    {"weight", doc.weight}});
  }
  return json_response(200, {{"topic", topic},
                             {"level", *level},
                             {"offset", offset},
                             {"total", state.map.documents.at(topic).size()},
                             {"documents", docs}});
}

}  // namespace

std::vector<std::string> ServiceState::level_topics(std::size_t level) const {
  for (const auto& entry : map.levels) {
    if (entry.level == level) return entry.topic_ids;
  }
  return {};
}

std::vector<std::string> tokenize_text(const std::string& text) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) words.push_back(lowercase(std::move(current)));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(lowercase(std::move(current)));
  return words;
}

bool valid_utf8(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t code = 0;
    if (c < 0x80) {
      // Control bytes other than whitespace mark binary content.
      if (c < 0x20 && c != '\t' && c != '\n' && c != '\r') return false;
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      code = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      code = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      code = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto next = static_cast<unsigned char>(text[i + k]);
      if ((next & 0xC0) != 0x80) return false;
      code = (code << 6) | (next & 0x3F);
    }
    static constexpr std::uint32_t kMinimum[] = {0, 0x80, 0x800, 0x10000};
    if (code < kMinimum[extra] || code > 0x10FFFF || (code >= 0xD800 && code <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

std::shared_ptr<const ServiceState> make_service_state(MapExport map, TopicModel top,
                                                       TopicModel leaf, CorpusSet corpus,
                                                       std::map<std::string, RawDocument> sidecar) {
  auto state = std::make_shared<ServiceState>();
  state->map_body = map.dump();
  state->map = std::move(map);
  state->top = std::move(top);
  state->leaf = std::move(leaf);
  state->corpus = std::move(corpus);
  state->sidecar = std::move(sidecar);
  for (std::size_t d = 0; d < state->corpus.num_documents(); ++d) {
    for (const auto& [token, count] : state->corpus.document(d).counts) {
      if (token.modality != Modality::kWord) continue;
      auto& postings = state->inverted_index[lowercase(token.surface)];
      if (postings.empty() || postings.back() != d) postings.push_back(d);
    }
  }
  return state;
}

std::shared_ptr<const ServiceState> load_service_state(const ServiceOptions& options) {
  HierarchyMeta meta;
  Hierarchy hierarchy = load_hierarchy(options.model_dir, &meta);
  CorpusSet corpus = load_corpus(options.model_dir / "corpus", meta.collection_ids);
  const auto map_path = options.map_path.value_or(options.model_dir / "map.json");
  MapExport map = MapExport::from_json(read_json_file(map_path));
  std::map<std::string, RawDocument> sidecar;
  const auto sidecar_path = options.sidecar_path.value_or(options.model_dir / "documents.jsonl");
  if (options.sidecar_path || std::filesystem::exists(sidecar_path)) sidecar = load_sidecar(sidecar_path);
  TopicModel top = hierarchy.levels.front();
  TopicModel leaf = hierarchy.levels.back();
  return make_service_state(std::move(map), std::move(top), std::move(leaf), std::move(corpus),
                            std::move(sidecar));
}

ApiResponse handle_request(const ServiceState* state, const ApiRequest& request) {
  if (state == nullptr) return error_response(503, "model is loading");
  const auto parts = split_path(request.path);
  if (parts.size() < 2 || parts[0] != "api") return error_response(404, "not found");
  try {
    if (request.method == "GET") {
      if (parts.size() == 2 && parts[1] == "map") return ApiResponse{200, state->map_body, "application/json"};
      if (parts.size() == 2 && parts[1] == "search") return handle_search(*state, request);
      if (parts.size() == 3 && parts[1] == "document") return handle_document(*state, parts[2]);
      if (parts.size() == 5 && parts[1] == "topic" && parts[4] == "documents") {
        return handle_topic_documents(*state, parts[2], parts[3], request);
      }
    } else if (request.method == "POST" && parts.size() == 2 && parts[1] == "upload") {
      return handle_upload(*state, request);
    }
  } catch (const Error& e) {
    return error_response(422, e.what());
  }
  return error_response(404, "not found");
}

void Service::publish(std::shared_ptr<const ServiceState> state) {
  std::lock_guard<std::mutex> lock(mutex_);
  state_ = std::move(state);
}

ApiResponse Service::handle(const ApiRequest& request) const {
  std::shared_ptr<const ServiceState> state;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    state = state_;
  }
  return handle_request(state.get(), request);
}

HttpServer::HttpServer(const Service& service) : server_(std::make_unique<httplib::Server>()) {
  server_->set_payload_max_length(kMaxUploadBytes + 1);
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
  const auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{req.method, req.path, {}, req.body};
    for (const auto& [name, value] : req.params) request.query.emplace(name, value);
    const ApiResponse response = service.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  server_->Get(R"(/api/.*)", dispatch);
  server_->Post(R"(/api/.*)", dispatch);
  server_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413) res.set_content(R"({"error":"upload exceeds 1 MiB"})" "\n", "application/json");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace topicmap
