// Copyright 2026 The Polir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stage-per-command batch pipeline: ingest, train, vectorize, query, classify,
// evaluate and report. Each stage reads and writes files under the output
// directory so stages can be re-run or swapped independently.

#ifndef POLIR_PIPELINE_H_
#define POLIR_PIPELINE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polir/corpus.h"
#include "polir/phraser.h"
#include "polir/retrieval.h"
#include "polir/service.h"
#include "polir/skipgram.h"

namespace polir {

struct PipelinePaths {
  std::string background_dir;  // directory of background .txt files
  std::string manifest;        // study corpus manifest CSV
  std::string embeddings;      // written by train, read downstream; default <out>/model/embeddings.bin
  std::string queries;         // query CSV
  std::string gold;            // gold labels CSV
  std::string out = "out";
  std::string cleaning_rules;  // JSON array of {pattern, replacement}; default rules when empty
  std::string lexicon;         // one word per line; built from the background corpus when empty
};

struct PipelineConfig {
  PipelinePaths paths;
  TrainConfig train;
  PhraseConfig phrases;
  SegmentOptions segment;
  SpellOptions spell;
  int lexicon_min_count = 1;
  uint64_t seed = 1;
  // Command-line overrides.
  std::optional<double> threshold;
  std::vector<AgendaQuery> inline_queries;

  // Relative paths resolve against `base_dir`. Unknown keys are rejected.
  static PipelineConfig from_json(const nlohmann::json &j, const std::string &base_dir = ".");
  static PipelineConfig load(const std::string &path);
  nlohmann::ordered_json to_json() const;
  void validate() const;

  // Derived artifact locations.
  std::string segmented_dir() const;
  std::string model_dir() const;
  std::string phrases_path() const;
  std::string embeddings_path() const;
  std::string vectors_dir() const;
  std::string tfidf_path() const;
  std::string labels_path() const;
  std::string hits_dir() const;
  std::string queries_dir() const;
  std::string reports_dir() const;
  std::string metrics_csv_path() const;
  std::string metrics_text_path() const;
};

struct StageResult {
  std::string stage;
  std::vector<std::string> artifacts;
  nlohmann::ordered_json summary;
};

StageResult run_ingest(const PipelineConfig &config);
StageResult run_train(const PipelineConfig &config);
StageResult run_vectorize(const PipelineConfig &config);
StageResult run_query(const PipelineConfig &config);
StageResult run_classify(const PipelineConfig &config);
StageResult run_evaluate(const PipelineConfig &config);
StageResult run_report(const PipelineConfig &config);
std::vector<StageResult> run_pipeline(const PipelineConfig &config);

// Background token streams after cleaning and segmentation, before phrasing.
std::vector<TokenStream> background_streams(const PipelineConfig &config);

// Inline queries if any, else the query file; threshold override applied.
std::vector<AgendaQuery> resolve_queries(const PipelineConfig &config);

// Loads the segmented corpus, embeddings, tf-idf statistics and paragraph
// vectors written by the upstream stages.
std::shared_ptr<const ServiceState> load_service_state(const PipelineConfig &config);

}  // namespace polir

#endif  // POLIR_PIPELINE_H_
