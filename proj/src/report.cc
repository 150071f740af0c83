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

#include "polir/report.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

QueryReport generate_report(const AgendaQuery &q, const std::vector<RetrievalHit> &hits,
                            const std::vector<DocLabel> &labels, const std::string &corpus_id,
                            const std::string &generated_at, const Corpus *corpus) {
  QueryReport r;
  r.query = q;
  r.generated_at = generated_at;
  r.corpus_id = corpus_id;
  r.hit_count = hits.size();

  std::map<std::string, DocumentGroup> groups;
  for (const auto &h : hits) {
    if (h.similarity < q.threshold) {
      throw Error(ErrorCode::kValidation, "hit " + h.para_id + " is below the query threshold");
    }
    auto [it, inserted] = groups.try_emplace(h.doc_id);
    DocumentGroup &g = it->second;
    if (inserted) {
      g.doc_id = h.doc_id;
      g.best_similarity = h.similarity;
      if (corpus) {
        if (const Document *d = corpus->find(h.doc_id)) {
          g.title = d->meta.title;
          g.country = d->meta.country;
          g.sector = d->meta.sector;
        }
      }
    }
    g.best_similarity = std::max(g.best_similarity, h.similarity);
    g.hits.push_back(h);
  }
  for (auto &[id, g] : groups) {
    std::sort(g.hits.begin(), g.hits.end(), [](const RetrievalHit &a, const RetrievalHit &b) {
      return a.similarity != b.similarity ? a.similarity > b.similarity : a.para_id < b.para_id;
    });
    r.groups.push_back(std::move(g));
  }
  std::sort(r.groups.begin(), r.groups.end(), [](const DocumentGroup &a, const DocumentGroup &b) {
    return a.best_similarity != b.best_similarity ? a.best_similarity > b.best_similarity : a.doc_id < b.doc_id;
  });

  r.labels = labels;
  std::sort(r.labels.begin(), r.labels.end(), [](const DocLabel &a, const DocLabel &b) { return a.doc_id < b.doc_id; });
  r.document_count = r.labels.size();
  r.positive_documents = static_cast<size_t>(
      std::count_if(r.labels.begin(), r.labels.end(), [](const DocLabel &l) { return l.predicted; }));
  return r;
}

std::string render_text(const QueryReport &r) {
  std::string out;
  out += "# Agenda report: " + r.query.label + "\n\n";
  out += "Generated: " + r.generated_at + "\n";
  out += "Corpus: " + r.corpus_id + "\n";
  std::string terms;
  for (size_t i = 0; i < r.query.terms.size(); ++i) terms += (i ? ", " : "") + r.query.terms[i];
  out += "Query terms: " + terms + "\n";
  out += "Threshold: " + io::format_fixed(r.query.threshold, 2) + "\n";
  if (!r.query.notes.empty()) out += "Notes: " + r.query.notes + "\n";
  out += "Retrieved paragraphs: " + std::to_string(r.hit_count) + "\n";
  out += "Positive documents: " + std::to_string(r.positive_documents) + " of " + std::to_string(r.document_count) + "\n";

  out += "\n## Retrieved passages\n";
  if (r.groups.empty()) out += "\n(none)\n";
  for (const auto &g : r.groups) {
    out += "\n### " + g.doc_id;
    if (!g.title.empty()) out += " - " + g.title;
    out += "\n";
    if (!g.country.empty() || !g.sector.empty()) out += "Country: " + g.country + "; sector: " + g.sector + "\n";
    for (const auto &h : g.hits) {
      out += "- [page " + std::to_string(h.page_number) + ", " + h.para_id + ", similarity " +
             io::format_fixed(h.similarity, 4) + "] " + h.excerpt + "\n";
    }
  }

  out += "\n## Document summary\n\n";
  for (const auto &l : r.labels) {
    out += "- " + l.doc_id + ": " + (l.predicted ? "positive" : "negative");
    if (l.best_similarity != kNoSimilarity) {
      out += " (best " + io::format_fixed(l.best_similarity, 4) + " at " + l.best_para_id + ", page " +
             std::to_string(l.best_page) + ")";
    }
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json render_json(const QueryReport &r) {
  nlohmann::ordered_json j;
  j["label"] = r.query.label;
  j["terms"] = r.query.terms;
  j["threshold"] = r.query.threshold;
  j["notes"] = r.query.notes;
  j["generated_at"] = r.generated_at;
  j["corpus_id"] = r.corpus_id;
  j["hit_count"] = r.hit_count;
  j["positive_documents"] = r.positive_documents;
  j["document_count"] = r.document_count;
  auto groups = nlohmann::ordered_json::array();
  for (const auto &g : r.groups) {
    nlohmann::ordered_json gj;
    gj["doc_id"] = g.doc_id;
    gj["title"] = g.title;
    gj["country"] = g.country;
    gj["sector"] = g.sector;
    gj["best_similarity"] = g.best_similarity;
    auto hits = nlohmann::ordered_json::array();
    for (const auto &h : g.hits) {
      nlohmann::ordered_json hj;
      hj["para_id"] = h.para_id;
      hj["page_number"] = h.page_number;
      hj["similarity"] = h.similarity;
      hj["excerpt"] = h.excerpt;
      hits.push_back(std::move(hj));
    }
    gj["hits"] = std::move(hits);
    groups.push_back(std::move(gj));
  }
  j["documents"] = std::move(groups);
  auto labels = nlohmann::ordered_json::array();
  for (const auto &l : r.labels) {
    nlohmann::ordered_json lj;
    lj["doc_id"] = l.doc_id;
    lj["predicted"] = l.predicted;
    if (l.best_similarity == kNoSimilarity) {
      lj["best_similarity"] = nullptr;
    } else {
      lj["best_similarity"] = l.best_similarity;
    }
    lj["best_para_id"] = l.best_para_id;
    lj["best_page"] = l.best_page;
    labels.push_back(std::move(lj));
  }
  j["summary"] = std::move(labels);
  return j;
}

std::string report_basename(const AgendaQuery &q) {
  std::string label;
  for (char c : q.label) {
    bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
    label.push_back(keep ? c : '_');
  }
  return label + "_" + io::format_fixed(q.threshold, 2);
}

std::string write_report(const std::string &dir, const QueryReport &report) {
  io::ensure_dir(dir);
  std::string base = io::join_path(dir, report_basename(report.query));
  io::write_file(base + ".report.txt", render_text(report));
  io::write_file(base + ".report.json", render_json(report).dump(2) + "\n");
  return base + ".report.txt";
}

}  // namespace polir
