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

// Seeded synthetic corpora: a planted-signal study corpus with gold labels and
// a matching background corpus, plus a two-family corpus for probing
// embedding geometry.

#ifndef POLIR_SYNTHETIC_H_
#define POLIR_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polir/phraser.h"
#include "polir/retrieval.h"

namespace polir {

struct SyntheticAgenda {
  std::string label;
  std::vector<std::string> words;        // topical vocabulary
  std::vector<std::string> query_terms;  // post-phrasing tokens
};

// The six built-in agenda. One of them relies on the "land tenure" collocation
// being merged by the phraser.
const std::vector<SyntheticAgenda> &synthetic_agenda();

struct SyntheticConfig {
  int documents = 30;
  int background_documents = 150;
  int background_paragraphs = 8;
  double agenda_rate = 0.4;  // chance a study document covers a given agenda
  double typo_rate = 0.02;   // chance a planted topical word is misspelled
  uint64_t seed = 2026;
};

struct SyntheticFixture {
  std::string manifest;         // manifest.csv
  std::string background_dir;   // directory of background .txt files
  std::string queries;          // queries.csv
  std::string gold;             // gold.csv
  std::string config;           // pipeline.json wired to the files above
  std::vector<AgendaQuery> query_list;
  size_t gold_positives = 0;
  size_t gold_labels = 0;
};

// Writes the study documents, manifest, background corpus, queries, gold labels
// and a pipeline config under `dir`. Output is a pure function of `config`.
SyntheticFixture write_synthetic_fixture(const std::string &dir, const SyntheticConfig &config = {});

struct FamilyCorpus {
  std::vector<TokenStream> streams;
  std::vector<std::pair<std::string, std::string>> partners;  // each probe with its family partner
  std::vector<std::string> unrelated;                         // tokens sharing no template
};

// Two families of two tokens each. Members of a family appear `occurrences`
// times each inside identical context templates; unrelated tokens fill
// sentences built from a disjoint template set.
FamilyCorpus two_family_corpus(uint64_t seed, int occurrences = 500);

}  // namespace polir

#endif  // POLIR_SYNTHETIC_H_
