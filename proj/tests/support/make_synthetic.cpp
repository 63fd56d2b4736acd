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

// Writes a synthetic heterogeneous corpus (base + two shifted collections),
// a document sidecar, and matching embeddings into a directory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "synthetic.hpp"
#include "topicmap/model_io.hpp"

using namespace topicmap;

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_synthetic <out dir> [seed]\n";
    return 1;
  }
  const std::filesystem::path out = argv[1];
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 1;
  const synthetic::HeterogeneousCorpus corpus = synthetic::heterogeneous_corpus(seed);
  std::vector<const Collection*> parts{&corpus.base};
  for (const auto& c : corpus.shifted) parts.push_back(&c);

  std::ostringstream sidecar;
  for (const Collection* c : parts) {
    std::ostringstream bow;
    write_collection(*c, bow);
    write_text_file(out / (c->id + ".bow"), bow.str());
    for (const auto& doc : c->documents) {
      std::string text;
      for (const auto& [token, count] : doc.counts) {
        if (token.modality != Modality::kWord) continue;
        for (std::uint32_t i = 0; i < count; ++i) text += token.surface + " ";
      }
      nlohmann::json record = {{"id", doc.id}, {"title", "Document " + doc.id},
                               {"author", "generator"}, {"collection", c->id}, {"text", text}};
      sidecar << record.dump() << '\n';
    }
  }
  write_text_file(out / "documents.jsonl", sidecar.str());
  std::ostringstream vectors;
  corpus.embeddings.write(vectors);
  write_text_file(out / "embeddings.txt", vectors.str());
  return 0;
}
