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

// Paragraph-level tf-idf and tf-idf weighted composition of word vectors.
//
//   tfidf(t, p) = f(t, p) / sum_t' f(t', p) * ln(N / n_t)
//
// with N the number of paragraphs and n_t the number of paragraphs that
// contain t.

#ifndef POLIR_VECTORIZER_H_
#define POLIR_VECTORIZER_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "polir/corpus.h"
#include "polir/skipgram.h"

namespace polir {

inline constexpr size_t kMaxQueryTerms = 5;

class TfidfStats {
 public:
  struct ParagraphCounts {
    std::unordered_map<std::string, long> counts;
    long length = 0;
  };

  void add_paragraph(const std::string &para_id, const std::vector<std::string> &tokens);
  // Combine statistics fitted on disjoint paragraph shards.
  void merge(const TfidfStats &other);

  long paragraph_count() const { return n_; }
  long document_frequency(const std::string &term) const;
  bool has_paragraph(const std::string &para_id) const { return lengths_.count(para_id) > 0; }
  long paragraph_length(const std::string &para_id) const;
  long term_count(const std::string &term, const std::string &para_id) const;

  double tf(const std::string &term, const std::string &para_id) const;
  // ln(N / n_t); terms never seen get max_idf().
  double idf(const std::string &term) const;
  double tfidf(const std::string &term, const std::string &para_id) const;
  double max_idf() const;

  const std::unordered_map<std::string, long> &document_frequencies() const { return df_; }

  // Document frequencies, N and paragraph lengths. Per-paragraph term counts
  // are not persisted.
  nlohmann::json to_json() const;
  static TfidfStats from_json(const nlohmann::json &j);

 private:
  std::unordered_map<std::string, ParagraphCounts> paragraphs_;
  std::unordered_map<std::string, long> lengths_;
  std::unordered_map<std::string, long> df_;
  long n_ = 0;
};

TfidfStats fit_tfidf(const std::vector<Paragraph> &paragraphs);
TfidfStats fit_tfidf(const Corpus &corpus);

struct ParagraphVector {
  std::string para_id;
  std::string doc_id;
  int page_number = 0;
  std::vector<float> vector;
  double coverage = 0.0;
  // False when no token carried weight; such paragraphs never match.
  bool retrievable = false;
};

ParagraphVector embed_paragraph(const Paragraph &para, const TfidfStats &stats, const Embeddings &emb);
std::vector<ParagraphVector> embed_corpus(const Corpus &corpus, const TfidfStats &stats, const Embeddings &emb);

// Query terms are weighted by idf alone and averaged. Throws kValidation for
// an empty or over-long query and kNotFound for a term without a vector.
std::vector<float> embed_query(const std::vector<std::string> &terms, const TfidfStats &stats, const Embeddings &emb);

// In-vocabulary tokens closest in spelling to `term`.
std::vector<std::string> suggest_terms(const std::string &term, const Embeddings &emb, size_t limit = 5);

// Normalizes analyst input: lowercase, inner whitespace joined as a phrase.
std::string normalize_term(const std::string &raw);

// paragraphs.bin: header "N d\n" then N*d little-endian float32, row-major.
// paragraphs.idx.tsv: para_id, doc_id, page_number, coverage, retrievable.
void write_paragraph_vectors(const std::string &dir, const std::vector<ParagraphVector> &vectors, size_t dim);
std::vector<ParagraphVector> read_paragraph_vectors(const std::string &dir);

}  // namespace polir

#endif  // POLIR_VECTORIZER_H_
