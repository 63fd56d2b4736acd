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

#include "topicmap/edge_scores.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

namespace topicmap {

const std::vector<std::string>& all_measure_names() {
  static const std::vector<std::string> names = {measure::kEmbedSim, measure::kCoocSim,
                                                 measure::kHellingerSim, measure::kKlSim};
  return names;
}

void check_measure_name(const std::string& name) {
  const auto& names = all_measure_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ArgumentError("unknown measure '" + name + "'");
  }
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{:.12g}", value);
}

double parse_real(const std::string& text) {
  if (text == "nan" || text == "NaN") return kNaN;
  // strtod keeps subnormal results that std::stod rejects as out of range.
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || std::isspace(static_cast<unsigned char>(text.front())) ||
      end != text.c_str() + text.size()) {
    throw DataError("not a number: '" + text + "'");
  }
  return value;
}

const EdgeScoreRow* EdgeScoreTable::find(const std::string& parent,
                                         const std::string& child) const {
  for (const auto& row : rows) {
    if (row.parent == parent && row.child == child) return &row;
  }
  return nullptr;
}

double EdgeScoreTable::score(const std::string& parent, const std::string& child,
                             const std::string& measure) const {
  const auto* row = find(parent, child);
  if (row == nullptr) return kNaN;
  const auto it = row->scores.find(measure);
  return it == row->scores.end() ? kNaN : it->second;
}

bool EdgeScoreTable::has_measure(const std::string& measure) const {
  return std::find(measures.begin(), measures.end(), measure) != measures.end();
}

void EdgeScoreTable::write_tsv(std::ostream& output) const {
  output << "parent\tchild\tmeasure\tvalue\n";
  for (const auto& row : rows) {
    for (const auto& name : measures) {
      const auto it = row.scores.find(name);
      output << row.parent << '\t' << row.child << '\t' << name << '\t'
             << format_real(it == row.scores.end() ? kNaN : it->second) << '\n';
    }
  }
}

EdgeScoreTable EdgeScoreTable::read_tsv(std::istream& input) {
  EdgeScoreTable table;
  std::string line;
  std::size_t line_number = 0;
  std::map<std::pair<std::string, std::string>, std::size_t> position;
  while (std::getline(input, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_number == 1 && line.starts_with("parent\t"))) continue;
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, '\t')) fields.push_back(field);
    if (fields.size() != 4) {
      throw DataError("edge scores line " + std::to_string(line_number) + ": expected 4 fields");
    }
    check_measure_name(fields[2]);
    if (!table.has_measure(fields[2])) table.measures.push_back(fields[2]);
    const auto key = std::make_pair(fields[0], fields[1]);
    auto it = position.find(key);
    if (it == position.end()) {
      it = position.emplace(key, table.rows.size()).first;
      table.rows.push_back(EdgeScoreRow{fields[0], fields[1], {}, std::nullopt});
    }
    table.rows[it->second].scores[fields[2]] = parse_real(fields[3]);
  }
  return table;
}

nlohmann::json EdgeScoreTable::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json scores = nlohmann::json::object();
    for (const auto& name : measures) {
      const auto it = row.scores.find(name);
      const double value = it == row.scores.end() ? kNaN : it->second;
      scores[name] = std::isnan(value) ? nlohmann::json(nullptr) : nlohmann::json(value);
    }
    nlohmann::json entry = {{"parent", row.parent}, {"child", row.child}, {"scores", scores}};
    if (row.label) entry["label"] = *row.label;
    rows_json.push_back(std::move(entry));
  }
  return {{"measures", measures}, {"rows", rows_json}};
}

}  // namespace topicmap
