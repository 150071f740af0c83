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

#include "polir/retrieval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

namespace {

double norm(std::span<const float> a) {
  double s = 0.0;
  for (float x : a) s += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(s);
}

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

bool hit_before(const RetrievalHit &a, const RetrievalHit &b, HitOrder order) {
  if (a.similarity != b.similarity) {
    return order == HitOrder::kDescending ? a.similarity > b.similarity : a.similarity < b.similarity;
  }
  if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
  return a.para_id < b.para_id;
}

RetrievalHit make_hit(const ScoredParagraph &s, const Corpus *corpus) {
  RetrievalHit h;
  h.para_id = s.paragraph->para_id;
  h.doc_id = s.paragraph->doc_id;
  h.page_number = s.paragraph->page_number;
  h.similarity = s.similarity;
  if (corpus) {
    if (const Paragraph *p = find_paragraph(*corpus, h.doc_id, h.para_id)) h.excerpt = p->text();
  }
  return h;
}

std::vector<RetrievalHit> collect(const std::vector<ScoredParagraph> &scored, double lower, double upper,
                                  HitOrder order, const Corpus *corpus) {
  std::vector<RetrievalHit> hits;
  for (const auto &s : scored) {
    if (s.similarity >= lower && s.similarity < upper) hits.push_back(make_hit(s, corpus));
  }
  std::sort(hits.begin(), hits.end(), [order](const auto &a, const auto &b) { return hit_before(a, b, order); });
  return hits;
}

}  // namespace

void AgendaQuery::validate() const {
  if (label.empty()) throw Error(ErrorCode::kValidation, "query label is empty");
  if (terms.empty()) throw Error(ErrorCode::kValidation, "query '" + label + "' has no terms");
  if (terms.size() > kMaxQueryTerms) {
    throw Error(ErrorCode::kValidation, "query '" + label + "' has " + std::to_string(terms.size()) +
                                            " terms; at most " + std::to_string(kMaxQueryTerms) + " are allowed");
  }
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kValidation, "query '" + label + "' threshold must be in (0, 1]");
  }
}

AgendaQuery parse_query_spec(const std::string &spec, double threshold) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kValidation, "query must look like 'label:term1,term2', got '" + spec + "'");
  }
  AgendaQuery q;
  q.label = io::trim(spec.substr(0, colon));
  for (const auto &t : io::split(spec.substr(colon + 1), ',')) {
    std::string term = normalize_term(t);
    if (!term.empty()) q.terms.push_back(term);
  }
  q.threshold = threshold;
  q.validate();
  return q;
}

std::vector<AgendaQuery> read_queries(const std::string &path) {
  auto rows = io::parse_csv(io::read_file(path));
  if (rows.empty()) throw Error(ErrorCode::kValidation, "query file " + path + " is empty");
  std::vector<AgendaQuery> out;
  size_t start = (!rows[0].empty() && io::trim(rows[0][0]) == "label") ? 1 : 0;
  for (size_t r = start; r < rows.size(); ++r) {
    const auto &row = rows[r];
    std::string where = path + " line " + std::to_string(r + 1);
    if (row.size() < 2) throw Error(ErrorCode::kParse, where + ": expected label,terms[,threshold[,notes]]");
    AgendaQuery q;
    q.label = io::trim(row[0]);
    for (const auto &t : io::split(row[1], '|')) {
      std::string term = normalize_term(t);
      if (!term.empty()) q.terms.push_back(term);
    }
    if (row.size() > 2 && !io::trim(row[2]).empty()) {
      try {
        q.threshold = std::stod(row[2]);
      } catch (const std::exception &) {
        throw Error(ErrorCode::kParse, where + ": bad threshold '" + row[2] + "'");
      }
    }
    if (row.size() > 3) q.notes = row[3];
    try {
      q.validate();
    } catch (const Error &e) {
      throw Error(ErrorCode::kValidation, where + ": " + e.what());
    }
    out.push_back(std::move(q));
  }
  return out;
}

void write_queries(const std::string &path, const std::vector<AgendaQuery> &queries) {
  std::string out = io::csv_line({"label", "terms", "threshold", "notes"});
  for (const auto &q : queries) {
    std::string terms;
    for (size_t i = 0; i < q.terms.size(); ++i) terms += (i ? "|" : "") + q.terms[i];
    out += io::csv_line({q.label, terms, io::format_real(q.threshold), q.notes});
  }
  io::write_file(path, out);
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kValidation, "cosine of vectors with different dimensions");
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::kValidation, "cosine similarity undefined for a zero vector");
  return dot(a, b) / (na * nb);
}

std::vector<Neighbor> nearest_words(std::span<const float> v, const Embeddings &emb, size_t k,
                                    const std::set<std::string> &exclude) {
  if (k == 0) throw Error(ErrorCode::kValidation, "k must be >= 1");
  if (v.size() != emb.dim()) throw Error(ErrorCode::kValidation, "query vector dimension mismatch");
  const double nv = norm(v);
  if (nv == 0.0) throw Error(ErrorCode::kValidation, "cannot rank neighbours of a zero vector");
  std::vector<Neighbor> all;
  all.reserve(emb.size());
  for (size_t i = 0; i < emb.size(); ++i) {
    const std::string &tok = emb.vocab.token(i);
    if (exclude.count(tok)) continue;
    auto row = emb.vector(i);
    double nr = norm(row);
    if (nr == 0.0) continue;
    all.push_back({tok, dot(v, row) / (nv * nr)});
  }
  auto before = [](const Neighbor &a, const Neighbor &b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.token < b.token;
  };
  size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<long>(take), all.end(), before);
  all.resize(take);
  return all;
}

std::vector<ScoredParagraph> score_paragraphs(std::span<const float> query_vector,
                                              const std::vector<ParagraphVector> &paragraphs) {
  const double nq = norm(query_vector);
  if (nq == 0.0) throw Error(ErrorCode::kValidation, "query vector is zero");
  std::vector<ScoredParagraph> out;
  out.reserve(paragraphs.size());
  for (const auto &p : paragraphs) {
    ScoredParagraph s{&p, kNoSimilarity};
    if (p.retrievable) {
      if (p.vector.size() != query_vector.size()) {
        throw Error(ErrorCode::kValidation, "paragraph " + p.para_id + " has a different dimension than the query");
      }
      double np = norm(p.vector);
      if (np > 0.0) s.similarity = dot(query_vector, p.vector) / (nq * np);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<RetrievalHit> select_hits(const std::vector<ScoredParagraph> &scored, double threshold, HitOrder order,
                                      const Corpus *corpus) {
  return collect(scored, threshold, std::numeric_limits<double>::infinity(), order, corpus);
}

std::vector<RetrievalHit> hits_between(const std::vector<ScoredParagraph> &scored, double lower, double upper,
                                       HitOrder order, const Corpus *corpus) {
  return collect(scored, lower, upper, order, corpus);
}

std::vector<RetrievalHit> retrieve(const AgendaQuery &q, std::span<const float> query_vector,
                                   const std::vector<ParagraphVector> &paragraphs, const Corpus *corpus,
                                   HitOrder order) {
  q.validate();
  return select_hits(score_paragraphs(query_vector, paragraphs), q.threshold, order, corpus);
}

std::vector<DocLabel> classify_documents(const AgendaQuery &q, const std::vector<ScoredParagraph> &scored,
                                         const std::vector<std::string> &doc_ids) {
  q.validate();
  std::unordered_map<std::string, size_t> pos;
  std::vector<DocLabel> labels;
  labels.reserve(doc_ids.size());
  for (const auto &id : doc_ids) {
    if (pos.emplace(id, labels.size()).second) labels.push_back({id, q.label, false, kNoSimilarity, "", 0});
  }
  for (const auto &s : scored) {
    auto it = pos.find(s.paragraph->doc_id);
    if (it == pos.end() || s.similarity == kNoSimilarity) continue;
    DocLabel &l = labels[it->second];
    bool better = s.similarity > l.best_similarity ||
                  (s.similarity == l.best_similarity && s.paragraph->para_id < l.best_para_id);
    if (better) {
      l.best_similarity = s.similarity;
      l.best_para_id = s.paragraph->para_id;
      l.best_page = s.paragraph->page_number;
    }
  }
  for (auto &l : labels) l.predicted = l.best_similarity >= q.threshold;
  return labels;
}

std::vector<DocLabel> classify_documents(const AgendaQuery &q, std::span<const float> query_vector,
                                         const std::vector<ParagraphVector> &paragraphs, const Corpus &corpus) {
  std::vector<std::string> ids;
  for (const auto &d : corpus.documents()) ids.push_back(d.meta.doc_id);
  return classify_documents(q, score_paragraphs(query_vector, paragraphs), ids);
}

double threshold_at(double start, double step, int k) {
  return std::round((start - static_cast<double>(k) * step) * 1e9) / 1e9;
}

ThresholdDescent::ThresholdDescent(std::vector<ScoredParagraph> scored, double start, double step, double floor,
                                   const Corpus *corpus)
    : scored_(std::move(scored)), start_(start), step_(step), floor_(floor), corpus_(corpus), current_(start) {
  if (!(step > 0.0)) throw Error(ErrorCode::kValidation, "threshold step must be positive");
}

std::optional<ThresholdDescent::Step> ThresholdDescent::next() {
  double theta = threshold_at(start_, step_, k_);
  if (theta < floor_ - 1e-12) return std::nullopt;
  double upper = k_ == 0 ? std::numeric_limits<double>::infinity() : threshold_at(start_, step_, k_ - 1);
  Step s{theta, collect(scored_, theta, upper, HitOrder::kDescending, corpus_)};
  current_ = theta;
  ++k_;
  return s;
}

const Paragraph *find_paragraph(const Corpus &corpus, const std::string &doc_id, const std::string &para_id) {
  const Document *d = corpus.find(doc_id);
  if (!d) return nullptr;
  for (const auto &p : d->paragraphs) {
    if (p.para_id == para_id) return &p;
  }
  return nullptr;
}

std::string hits_to_csv(const std::vector<RetrievalHit> &hits) {
  std::string out = io::csv_line({"doc_id", "page_number", "para_id", "similarity", "excerpt"});
  for (const auto &h : hits) {
    out += io::csv_line({h.doc_id, std::to_string(h.page_number), h.para_id, io::format_fixed(h.similarity, 6), h.excerpt});
  }
  return out;
}

std::string labels_to_csv(const std::vector<DocLabel> &labels) {
  std::string out = io::csv_line({"agenda", "doc_id", "predicted", "best_similarity", "best_para_id", "best_page"});
  for (const auto &l : labels) {
    std::string sim = l.best_similarity == kNoSimilarity ? "" : io::format_fixed(l.best_similarity, 6);
    out += io::csv_line({l.label, l.doc_id, l.predicted ? "1" : "0", sim, l.best_para_id,
                         l.best_page ? std::to_string(l.best_page) : ""});
  }
  return out;
}

std::vector<DocLabel> labels_from_csv(const std::string &text) {
  auto rows = io::parse_csv(text);
  std::vector<DocLabel> out;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() < 3) throw Error(ErrorCode::kParse, "labels line " + std::to_string(r + 1) + ": too few fields");
    DocLabel l;
    l.label = row[0];
    l.doc_id = row[1];
    l.predicted = io::trim(row[2]) == "1";
    if (row.size() > 3 && !io::trim(row[3]).empty()) l.best_similarity = std::stod(row[3]);
    if (row.size() > 4) l.best_para_id = row[4];
    if (row.size() > 5 && !io::trim(row[5]).empty()) l.best_page = std::stoi(row[5]);
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace polir
