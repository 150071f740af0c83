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

// Small builders for hand-made embeddings and paragraphs.

#ifndef POLIR_TESTS_FIXTURES_H_
#define POLIR_TESTS_FIXTURES_H_

#include <string>
#include <utility>
#include <vector>

#include "polir/corpus.h"
#include "polir/skipgram.h"

namespace polir::testing {

inline Embeddings make_embeddings(const std::vector<std::pair<std::string, std::vector<float>>> &rows) {
  Embeddings e;
  std::vector<std::string> tokens;
  e.matrix.rows = rows.size();
  e.matrix.dim = rows.empty() ? 0 : rows[0].second.size();
  e.matrix.config.dim = static_cast<int>(e.matrix.dim);
  for (const auto &[t, v] : rows) {
    tokens.push_back(t);
    e.matrix.input.insert(e.matrix.input.end(), v.begin(), v.end());
  }
  e.vocab = Vocabulary::from_tokens(std::move(tokens));
  return e;
}

inline Paragraph make_paragraph(const std::string &doc_id, int ordinal, std::vector<std::string> tokens,
                                int page = 1) {
  Paragraph p;
  p.doc_id = doc_id;
  p.para_id = doc_id + ".p" + std::to_string(ordinal);
  p.page_number = page;
  p.tokens = std::move(tokens);
  std::string text;
  for (const auto &t : p.tokens) text += (text.empty() ? "" : " ") + t;
  p.sentences = {text};
  return p;
}

}  // namespace polir::testing

#endif  // POLIR_TESTS_FIXTURES_H_
