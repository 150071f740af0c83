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

// Per-query audit reports: every retrieved passage with its document, page
// and similarity, grouped by document.

#ifndef POLIR_REPORT_H_
#define POLIR_REPORT_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "polir/corpus.h"
#include "polir/retrieval.h"

namespace polir {

struct DocumentGroup {
  std::string doc_id;
  std::string title;
  std::string country;
  std::string sector;
  double best_similarity = 0.0;
  std::vector<RetrievalHit> hits;  // descending similarity
};

struct QueryReport {
  AgendaQuery query;
  std::string generated_at;
  std::string corpus_id;
  std::vector<DocumentGroup> groups;  // best similarity descending, then doc_id
  std::vector<DocLabel> labels;       // sorted by doc_id
  size_t hit_count = 0;
  size_t positive_documents = 0;
  size_t document_count = 0;
};

// ISO-8601 UTC time of the call.
std::string utc_timestamp();

// Hits below the query threshold are rejected with kValidation. `corpus`,
// when given, supplies document metadata.
QueryReport generate_report(const AgendaQuery &q, const std::vector<RetrievalHit> &hits,
                            const std::vector<DocLabel> &labels, const std::string &corpus_id,
                            const std::string &generated_at, const Corpus *corpus = nullptr);

std::string render_text(const QueryReport &report);
nlohmann::ordered_json render_json(const QueryReport &report);

// "<label>_<threshold>", label characters outside [A-Za-z0-9-] mapped to '_'.
std::string report_basename(const AgendaQuery &q);

// Writes <basename>.report.txt and <basename>.report.json into `dir`;
// returns the text report path.
std::string write_report(const std::string &dir, const QueryReport &report);

}  // namespace polir

#endif  // POLIR_REPORT_H_
