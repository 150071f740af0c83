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

// Cosine retrieval over paragraph vectors and the document rule built on it:
// a document is positive for a query when at least one of its paragraphs has
// cosine similarity >= the query threshold.
//
// All scans are exhaustive. Equal similarities are ordered by doc_id, then
// para_id (tokens, for word neighbours).

#ifndef POLIR_RETRIEVAL_H_
#define POLIR_RETRIEVAL_H_

#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polir/corpus.h"
#include "polir/skipgram.h"
#include "polir/vectorizer.h"

namespace polir {

inline constexpr double kDefaultThreshold = 0.55;
inline constexpr double kDefaultThresholdStep = 0.01;
inline constexpr double kDefaultThresholdFloor = 0.40;
inline constexpr size_t kDefaultNeighbors = 50;
inline constexpr double kNoSimilarity = -std::numeric_limits<double>::infinity();

struct AgendaQuery {
  std::string label;
  std::vector<std::string> terms;
  double threshold = kDefaultThreshold;
  std::string notes;

  // 1..5 terms, threshold in (0, 1], non-empty label.
  void validate() const;
};

// "label:term1,term2" as accepted on the command line.
AgendaQuery parse_query_spec(const std::string &spec, double threshold = kDefaultThreshold);

// CSV with header label,terms,threshold,notes; terms separated by '|'.
std::vector<AgendaQuery> read_queries(const std::string &path);
void write_queries(const std::string &path, const std::vector<AgendaQuery> &queries);

struct RetrievalHit {
  std::string para_id;
  std::string doc_id;
  int page_number = 0;
  double similarity = 0.0;
  std::string excerpt;
};

struct DocLabel {
  std::string doc_id;
  std::string label;
  bool predicted = false;
  double best_similarity = kNoSimilarity;
  std::string best_para_id;
  int best_page = 0;
};

struct Neighbor {
  std::string token;
  double similarity = 0.0;
};

// (a.b) / (|a||b|), unclamped. Throws kValidation if either vector is zero.
double cosine(std::span<const float> a, std::span<const float> b);

// Exact top-k by cosine over the whole vocabulary, excluding `exclude`.
std::vector<Neighbor> nearest_words(std::span<const float> v, const Embeddings &emb, size_t k,
                                    const std::set<std::string> &exclude = {});

struct ScoredParagraph {
  const ParagraphVector *paragraph = nullptr;
  // kNoSimilarity for non-retrievable paragraphs.
  double similarity = kNoSimilarity;
};

std::vector<ScoredParagraph> score_paragraphs(std::span<const float> query_vector,
                                              const std::vector<ParagraphVector> &paragraphs);

enum class HitOrder { kDescending, kAscending };

// Paragraphs with similarity >= threshold. Excerpts are filled from `corpus`
// when given.
std::vector<RetrievalHit> select_hits(const std::vector<ScoredParagraph> &scored, double threshold,
                                      HitOrder order = HitOrder::kDescending, const Corpus *corpus = nullptr);

std::vector<RetrievalHit> retrieve(const AgendaQuery &q, std::span<const float> query_vector,
                                   const std::vector<ParagraphVector> &paragraphs, const Corpus *corpus = nullptr,
                                   HitOrder order = HitOrder::kDescending);

// One label per document in `doc_ids`, in that order.
std::vector<DocLabel> classify_documents(const AgendaQuery &q, const std::vector<ScoredParagraph> &scored,
                                         const std::vector<std::string> &doc_ids);
std::vector<DocLabel> classify_documents(const AgendaQuery &q, std::span<const float> query_vector,
                                         const std::vector<ParagraphVector> &paragraphs, const Corpus &corpus);

// Threshold k steps below `start`, snapped to a 1e-9 grid so repeated
// subtraction does not drift (0.55 - 2 * 0.01 == 0.53).
double threshold_at(double start, double step, int k);

// Walks the threshold down from `start` by `step` until it passes `floor`,
// reporting the hits admitted at each step.
class ThresholdDescent {
 public:
  struct Step {
    double threshold = 0.0;
    std::vector<RetrievalHit> admitted;
  };

  ThresholdDescent(std::vector<ScoredParagraph> scored, double start, double step = kDefaultThresholdStep,
                   double floor = kDefaultThresholdFloor, const Corpus *corpus = nullptr);

  std::optional<Step> next();
  // Threshold of the last step returned; `start` before the first call.
  double current() const { return current_; }

 private:
  std::vector<ScoredParagraph> scored_;
  double start_, step_, floor_;
  const Corpus *corpus_;
  int k_ = 0;
  double current_;
};

// Hits in [lower, upper): paragraphs admitted when the threshold moves from
// `upper` down to `lower`.
std::vector<RetrievalHit> hits_between(const std::vector<ScoredParagraph> &scored, double lower, double upper,
                                       HitOrder order = HitOrder::kDescending, const Corpus *corpus = nullptr);

const Paragraph *find_paragraph(const Corpus &corpus, const std::string &doc_id, const std::string &para_id);

std::string hits_to_csv(const std::vector<RetrievalHit> &hits);
std::string labels_to_csv(const std::vector<DocLabel> &labels);
std::vector<DocLabel> labels_from_csv(const std::string &text);

}  // namespace polir

#endif  // POLIR_RETRIEVAL_H_
