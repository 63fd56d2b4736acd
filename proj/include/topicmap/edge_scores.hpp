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

#ifndef TOPICMAP_EDGE_SCORES_HPP_
#define TOPICMAP_EDGE_SCORES_HPP_

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "topicmap/common.hpp"

namespace topicmap {

namespace measure {
inline constexpr const char* kEmbedSim = "embed_sim";
inline constexpr const char* kCoocSim = "cooc_sim";
inline constexpr const char* kHellingerSim = "hellinger_sim";
inline constexpr const char* kKlSim = "kl_sim";
}  // namespace measure

// Throws ArgumentError for names other than the four edge measures.
void check_measure_name(const std::string& name);
const std::vector<std::string>& all_measure_names();

struct EdgeScoreRow {
  std::string parent;
  std::string child;
  std::map<std::string, double> scores;
  std::optional<int> label;  // +1 / -1 from assessors
};

// Per-edge measure values for every candidate (parent, child) pair.
struct EdgeScoreTable {
  std::vector<std::string> measures;
  std::vector<EdgeScoreRow> rows;

  const EdgeScoreRow* find(const std::string& parent, const std::string& child) const;
  // NaN when the row or measure is missing.
  double score(const std::string& parent, const std::string& child,
               const std::string& measure) const;
  bool has_measure(const std::string& measure) const;

  // parent<TAB>child<TAB>measure<TAB>value, one line per (edge, measure).
  void write_tsv(std::ostream& output) const;
  static EdgeScoreTable read_tsv(std::istream& input);
  nlohmann::json to_json() const;
};

// Round-trip-safe formatting used by all TSV writers ("nan" for NaN).
std::string format_real(double value);
double parse_real(const std::string& text);

}  // namespace topicmap

#endif  // TOPICMAP_EDGE_SCORES_HPP_
