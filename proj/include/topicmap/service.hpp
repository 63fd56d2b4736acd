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

// Read-only HTTP API over a loaded topic map. Request handling is a pure
// function of (ServiceState, ApiRequest) so it can be tested without a
// socket; HttpServer binds it to cpp-httplib.

#ifndef TOPICMAP_SERVICE_HPP_
#define TOPICMAP_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "topicmap/artm.hpp"
#include "topicmap/common.hpp"
#include "topicmap/corpus.hpp"
#include "topicmap/map_export.hpp"

namespace httplib {
class Server;
}

namespace topicmap {

inline constexpr std::size_t kMaxUploadBytes = 1 << 20;
inline constexpr std::size_t kMaxHighlights = 5;
// Topics below this fold-in weight are never highlighted.
inline constexpr double kMinHighlightWeight = 0.01;
inline constexpr std::size_t kMaxSuggestions = 5;
inline constexpr std::size_t kServiceFoldInIterations = 50;
inline constexpr std::size_t kDefaultPageSize = 10;

struct ServiceState {
  MapExport map;
  std::string map_body;  // cached /api/map response
  TopicModel top;        // level 1: search and upload
  TopicModel leaf;       // deepest level: tag and document suggestions
  CorpusSet corpus;
  std::map<std::string, RawDocument> sidecar;
  // Lowercased word surface -> sorted corpus document indices.
  std::map<std::string, std::vector<std::size_t>> inverted_index;

  std::vector<std::string> level_topics(std::size_t level) const;
};

struct ServiceOptions {
  std::filesystem::path model_dir;
  // Defaults: <model_dir>/map.json and <model_dir>/documents.jsonl (optional).
  std::optional<std::filesystem::path> map_path;
  std::optional<std::filesystem::path> sidecar_path;
};

// Loads a hierarchy directory (with its corpus/) and an exported map.
std::shared_ptr<const ServiceState> load_service_state(const ServiceOptions& options);
std::shared_ptr<const ServiceState> make_service_state(MapExport map, TopicModel top,
                                                       TopicModel leaf, CorpusSet corpus,
                                                       std::map<std::string, RawDocument> sidecar);

struct ApiRequest {
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Whitespace split and ASCII lowercasing.
std::vector<std::string> tokenize_text(const std::string& text);
bool valid_utf8(const std::string& text);

// A null state answers 503.
ApiResponse handle_request(const ServiceState* state, const ApiRequest& request);

// Holds the state published once loading finishes.
class Service {
 public:
  void publish(std::shared_ptr<const ServiceState> state);
  ApiResponse handle(const ApiRequest& request) const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const ServiceState> state_;
};

// cpp-httplib binding with permissive CORS.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace topicmap

#endif  // TOPICMAP_SERVICE_HPP_
