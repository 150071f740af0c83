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

#include "polir/vectorizer.h"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

void TfidfStats::add_paragraph(const std::string &para_id, const std::vector<std::string> &tokens) {
  if (lengths_.count(para_id)) throw Error(ErrorCode::kConflict, "paragraph '" + para_id + "' counted twice");
  ParagraphCounts pc;
  for (const auto &t : tokens) ++pc.counts[t];
  pc.length = static_cast<long>(tokens.size());
  for (const auto &[t, c] : pc.counts) ++df_[t];
  lengths_[para_id] = pc.length;
  paragraphs_.emplace(para_id, std::move(pc));
  ++n_;
}

void TfidfStats::merge(const TfidfStats &other) {
  for (const auto &[id, len] : other.lengths_) {
    if (lengths_.count(id)) throw Error(ErrorCode::kConflict, "paragraph '" + id + "' present in both shards");
    lengths_[id] = len;
  }
  for (const auto &[id, pc] : other.paragraphs_) paragraphs_[id] = pc;
  for (const auto &[t, n] : other.df_) df_[t] += n;
  n_ += other.n_;
}

long TfidfStats::document_frequency(const std::string &term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

long TfidfStats::paragraph_length(const std::string &para_id) const {
  auto it = lengths_.find(para_id);
  return it == lengths_.end() ? 0 : it->second;
}

long TfidfStats::term_count(const std::string &term, const std::string &para_id) const {
  auto it = paragraphs_.find(para_id);
  if (it == paragraphs_.end()) return 0;
  auto c = it->second.counts.find(term);
  return c == it->second.counts.end() ? 0 : c->second;
}

double TfidfStats::tf(const std::string &term, const std::string &para_id) const {
  long len = paragraph_length(para_id);
  if (len == 0) return 0.0;
  return static_cast<double>(term_count(term, para_id)) / static_cast<double>(len);
}

double TfidfStats::idf(const std::string &term) const {
  long n = document_frequency(term);
  if (n == 0) return max_idf();
  return std::log(static_cast<double>(n_) / static_cast<double>(n));
}

double TfidfStats::tfidf(const std::string &term, const std::string &para_id) const {
  if (term_count(term, para_id) == 0) return 0.0;
  return tf(term, para_id) * idf(term);
}

double TfidfStats::max_idf() const {
  long min_df = 0;
  for (const auto &[t, n] : df_) {
    if (min_df == 0 || n < min_df) min_df = n;
  }
  if (min_df == 0) return 0.0;
  return std::log(static_cast<double>(n_) / static_cast<double>(min_df));
}

nlohmann::json TfidfStats::to_json() const {
  std::map<std::string, long> df(df_.begin(), df_.end());
  std::map<std::string, long> lengths(lengths_.begin(), lengths_.end());
  return {{"paragraph_count", n_}, {"document_frequency", df}, {"paragraph_length", lengths}};
}

TfidfStats TfidfStats::from_json(const nlohmann::json &j) {
  TfidfStats s;
  try {
    s.n_ = j.at("paragraph_count").get<long>();
    for (const auto &[t, n] : j.at("document_frequency").items()) s.df_[t] = n.get<long>();
    for (const auto &[id, n] : j.at("paragraph_length").items()) s.lengths_[id] = n.get<long>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("tf-idf statistics: ") + e.what());
  }
  return s;
}

TfidfStats fit_tfidf(const std::vector<Paragraph> &paragraphs) {
  if (paragraphs.empty()) throw Error(ErrorCode::kValidation, "cannot fit tf-idf on an empty corpus");
  TfidfStats s;
  for (const auto &p : paragraphs) s.add_paragraph(p.para_id, p.tokens);
  return s;
}

TfidfStats fit_tfidf(const Corpus &corpus) {
  TfidfStats s;
  for (const auto &d : corpus.documents()) {
    for (const auto &p : d.paragraphs) s.add_paragraph(p.para_id, p.tokens);
  }
  if (s.paragraph_count() == 0) throw Error(ErrorCode::kValidation, "cannot fit tf-idf on an empty corpus");
  return s;
}

ParagraphVector embed_paragraph(const Paragraph &para, const TfidfStats &stats, const Embeddings &emb) {
  if (emb.dim() == 0) throw Error(ErrorCode::kConfig, "embeddings have zero dimension");
  if (!stats.has_paragraph(para.para_id) ||
      stats.paragraph_length(para.para_id) != static_cast<long>(para.tokens.size())) {
    throw Error(ErrorCode::kConfig, "paragraph '" + para.para_id + "' is not part of the fitted tf-idf statistics");
  }
  ParagraphVector out;
  out.para_id = para.para_id;
  out.doc_id = para.doc_id;
  out.page_number = para.page_number;
  out.vector.assign(emb.dim(), 0.0f);
  if (para.tokens.empty()) return out;

  // Distinct terms in sorted order, so the sum does not depend on token order.
  std::map<std::string, long> counts;
  for (const auto &t : para.tokens) ++counts[t];
  const double len = static_cast<double>(para.tokens.size());
  std::vector<double> acc(emb.dim(), 0.0);
  double weight_sum = 0.0;
  long covered = 0;
  for (const auto &[term, f] : counts) {
    int idx = emb.index_of(term);
    if (idx < 0) continue;
    covered += f;
    double w = static_cast<double>(f) / len * stats.idf(term);
    if (w == 0.0) continue;
    auto v = emb.vector(static_cast<size_t>(idx));
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
    weight_sum += w;
  }
  out.coverage = static_cast<double>(covered) / len;
  if (weight_sum > 0.0) {
    for (size_t i = 0; i < acc.size(); ++i) out.vector[i] = static_cast<float>(acc[i] / weight_sum);
    out.retrievable = std::any_of(out.vector.begin(), out.vector.end(), [](float x) { return x != 0.0f; });
  }
  return out;
}

std::vector<ParagraphVector> embed_corpus(const Corpus &corpus, const TfidfStats &stats, const Embeddings &emb) {
  std::vector<ParagraphVector> out;
  out.reserve(corpus.paragraph_count());
  for (const auto &d : corpus.documents()) {
    for (const auto &p : d.paragraphs) out.push_back(embed_paragraph(p, stats, emb));
  }
  return out;
}

std::string normalize_term(const std::string &raw) {
  std::string t = io::lower(io::trim(raw));
  std::string out;
  bool space = false;
  for (char c : t) {
    if (c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(kPhraseJoiner);
    space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> suggest_terms(const std::string &term, const Embeddings &emb, size_t limit) {
  constexpr int kMaxDistance = 3;
  std::vector<std::pair<int, std::string>> scored;
  for (const auto &tok : emb.vocab.tokens()) {
    int d = edit_distance(term, tok, kMaxDistance);
    if (d <= kMaxDistance) scored.emplace_back(d, tok);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (size_t i = 0; i < scored.size() && out.size() < limit; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<float> embed_query(const std::vector<std::string> &terms, const TfidfStats &stats, const Embeddings &emb) {
  if (terms.empty()) throw Error(ErrorCode::kValidation, "query has no terms");
  if (terms.size() > kMaxQueryTerms) {
    throw Error(ErrorCode::kValidation, "query has " + std::to_string(terms.size()) + " terms; at most " +
                                            std::to_string(kMaxQueryTerms) + " are allowed");
  }
  std::map<std::string, int> distinct;
  for (const auto &t : terms) {
    int idx = emb.index_of(t);
    if (idx < 0) {
      std::string msg = "query term '" + t + "' has no embedding";
      auto near = suggest_terms(t, emb);
      if (!near.empty()) {
        msg += "; nearest in-vocabulary terms:";
        for (const auto &s : near) msg += " " + s;
      }
      throw Error(ErrorCode::kNotFound, msg);
    }
    distinct.emplace(t, idx);
  }
  std::vector<double> acc(emb.dim(), 0.0);
  double weight_sum = 0.0;
  for (const auto &[t, idx] : distinct) {
    double w = stats.idf(t);
    auto v = emb.vector(static_cast<size_t>(idx));
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) {
    // Every term occurs in every paragraph: fall back to the plain mean.
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto &[t, idx] : distinct) {
      auto v = emb.vector(static_cast<size_t>(idx));
      for (size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
    }
    weight_sum = static_cast<double>(distinct.size());
  }
  std::vector<float> out(emb.dim());
  for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<float>(acc[i] / weight_sum);
  return out;
}

void write_paragraph_vectors(const std::string &dir, const std::vector<ParagraphVector> &vectors, size_t dim) {
  io::ensure_dir(dir);
  std::string bin = std::to_string(vectors.size()) + " " + std::to_string(dim) + "\n";
  std::string idx;
  for (const auto &pv : vectors) {
    if (pv.vector.size() != dim) throw Error(ErrorCode::kInternal, "paragraph vector has wrong dimension");
    bin.append(reinterpret_cast<const char *>(pv.vector.data()), dim * sizeof(float));
    idx += pv.para_id + "\t" + pv.doc_id + "\t" + std::to_string(pv.page_number) + "\t" +
           io::format_real(pv.coverage) + "\t" + (pv.retrievable ? "1" : "0") + "\n";
  }
  io::write_file(io::join_path(dir, "paragraphs.bin"), bin);
  io::write_file(io::join_path(dir, "paragraphs.idx.tsv"), idx);
}

std::vector<ParagraphVector> read_paragraph_vectors(const std::string &dir) {
  std::string bin = io::read_file(io::join_path(dir, "paragraphs.bin"));
  std::string idx = io::read_file(io::join_path(dir, "paragraphs.idx.tsv"));
  size_t eol = bin.find('\n');
  long n = -1, dim = -1;
  if (eol == std::string::npos || std::sscanf(bin.substr(0, eol).c_str(), "%ld %ld", &n, &dim) != 2 || n < 0 || dim < 1) {
    throw Error(ErrorCode::kParse, "paragraphs.bin: malformed header");
  }
  const size_t row_bytes = static_cast<size_t>(dim) * sizeof(float);
  if (bin.size() != eol + 1 + static_cast<size_t>(n) * row_bytes) {
    throw Error(ErrorCode::kParse, "paragraphs.bin: size does not match header");
  }
  std::vector<ParagraphVector> out;
  std::istringstream in(idx);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = io::split(line, '\t');
    if (f.size() != 5) {
      throw Error(ErrorCode::kParse, "paragraphs.idx.tsv line " + std::to_string(lineno) + ": expected 5 fields");
    }
    if (static_cast<long>(out.size()) >= n) {
      throw Error(ErrorCode::kParse, "paragraphs.idx.tsv line " + std::to_string(lineno) + ": more rows than vectors");
    }
    ParagraphVector pv;
    pv.para_id = f[0];
    pv.doc_id = f[1];
    try {
      pv.page_number = std::stoi(f[2]);
      pv.coverage = std::stod(f[3]);
    } catch (const std::exception &) {
      throw Error(ErrorCode::kParse, "paragraphs.idx.tsv line " + std::to_string(lineno) + ": bad number");
    }
    pv.retrievable = f[4] == "1";
    pv.vector.resize(static_cast<size_t>(dim));
    std::memcpy(pv.vector.data(), bin.data() + eol + 1 + out.size() * row_bytes, row_bytes);
    out.push_back(std::move(pv));
  }
  if (static_cast<long>(out.size()) != n) throw Error(ErrorCode::kParse, "paragraphs.idx.tsv: fewer rows than vectors");
  return out;
}

}  // namespace polir
