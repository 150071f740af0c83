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

#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "polir/io.h"
#include "test_util.h"

namespace polir {
namespace {

using testing::make_embeddings;
using testing::ScratchDir;

std::string collapse(const std::string &s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string without_timestamp(const std::string &text, const std::string &marker) {
  std::string out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    if (line.find(marker) == std::string::npos) out += line + "\n";
    pos = end + 1;
  }
  return out;
}

struct Fixture {
  Corpus corpus;
  Embeddings emb;
  std::vector<ParagraphVector> vectors;

  Fixture() {
    SegmentOptions opt;
    opt.min_paragraph_tokens = 3;
    corpus.add(segment(ingest("Forest cover is shrinking fast.\n\nRivers need  care and money.\fTree planting\nprogramme for forest land.",
                              {"doc-a", "KE", "forestry", "Forest plan"}),
                       opt));
    corpus.add(segment(ingest("Solar grid expansion is planned.", {"doc-b", "UG", "energy", "Energy plan"}), opt));
    emb = make_embeddings({{"forest", {1, 0, 0}}, {"tree", {0.9f, 0.1f, 0}}, {"planting", {0.8f, 0.2f, 0}},
                           {"rivers", {0, 1, 0}}, {"solar", {0, 0, 1}}, {"grid", {0.1f, 0, 1}}});
    auto stats = fit_tfidf(corpus);
    vectors = embed_corpus(corpus, stats, emb);
  }
};

AgendaQuery forest_query(double theta) {
  AgendaQuery q;
  q.label = "Forest restoration";
  q.terms = {"forest"};
  q.threshold = theta;
  return q;
}

TEST_CASE("hits are grouped by document with page references") {
  Fixture f;
  auto q = forest_query(0.5);
  std::vector<float> qv = {1, 0, 0};
  auto hits = retrieve(q, qv, f.vectors, &f.corpus);
  auto labels = classify_documents(q, qv, f.vectors, f.corpus);
  REQUIRE(hits.size() == 2);
  auto r = generate_report(q, hits, labels, "fixture", "2026-01-01T00:00:00Z", &f.corpus);
  REQUIRE(r.groups.size() == 1);
  CHECK(r.groups[0].doc_id == "doc-a");
  CHECK(r.groups[0].title == "Forest plan");
  CHECK(r.groups[0].hits.size() == 2);
  CHECK(r.hit_count == hits.size());
  CHECK(r.positive_documents == 1);
  CHECK(r.document_count == 2);
  auto text = render_text(r);
  CHECK(text.find("page 1") != std::string::npos);
  CHECK(text.find("page 2") != std::string::npos);
  CHECK(text.find("doc-b: negative") != std::string::npos);
}

TEST_CASE("every excerpt resolves to its page") {
  Fixture f;
  auto q = forest_query(0.01);
  std::vector<float> qv = {1, 0.5f, 0.5f};
  auto hits = retrieve(q, qv, f.vectors, &f.corpus);
  REQUIRE(hits.size() >= 3);
  auto r = generate_report(q, hits, {}, "fixture", "t", &f.corpus);
  for (const auto &g : r.groups) {
    for (const auto &h : g.hits) {
      const Document *d = f.corpus.find(h.doc_id);
      REQUIRE(d != nullptr);
      REQUIRE(h.page_number >= 1);
      REQUIRE(h.page_number <= static_cast<int>(d->pages.size()));
      CHECK(!h.excerpt.empty());
      CHECK(collapse(d->pages[static_cast<size_t>(h.page_number) - 1]).find(h.excerpt) != std::string::npos);
    }
  }
}

TEST_CASE("query without hits gives an empty section and negative summary") {
  Fixture f;
  auto q = forest_query(0.99);
  std::vector<float> qv = {0, 0.7f, -0.7f};
  auto hits = retrieve(q, qv, f.vectors, &f.corpus);
  CHECK(hits.empty());
  auto labels = classify_documents(q, qv, f.vectors, f.corpus);
  auto r = generate_report(q, hits, labels, "fixture", "t", &f.corpus);
  CHECK(r.groups.empty());
  CHECK(r.positive_documents == 0);
  CHECK(render_text(r).find("(none)") != std::string::npos);
  CHECK(render_json(r)["documents"].empty());
}

TEST_CASE("regenerated reports differ only in the timestamp") {
  Fixture f;
  auto q = forest_query(0.3);
  std::vector<float> qv = {1, 0.2f, 0};
  auto hits = retrieve(q, qv, f.vectors, &f.corpus);
  auto labels = classify_documents(q, qv, f.vectors, f.corpus);
  auto a = generate_report(q, hits, labels, "fixture", "2026-01-01T00:00:00Z", &f.corpus);
  auto b = generate_report(q, hits, labels, "fixture", "2026-02-02T12:00:00Z", &f.corpus);
  auto ta = render_text(a), tb = render_text(b);
  CHECK(ta != tb);
  CHECK(without_timestamp(ta, "Generated:") == without_timestamp(tb, "Generated:"));
  auto ja = render_json(a).dump(2), jb = render_json(b).dump(2);
  CHECK(without_timestamp(ja, "\"generated_at\"") == without_timestamp(jb, "\"generated_at\""));
}

TEST_CASE("hits below the threshold are rejected") {
  RetrievalHit h{"d.p1", "d", 1, 0.4, "x"};
  CHECK_ERROR_CODE(generate_report(forest_query(0.5), {h}, {}, "c", "t"), ErrorCode::kValidation);
}

TEST_CASE("report files are named after label and threshold") {
  Fixture f;
  auto q = forest_query(0.53);
  CHECK(report_basename(q) == "Forest_restoration_0.53");
  ScratchDir dir("report");
  auto r = generate_report(q, {}, {}, "fixture", "t", &f.corpus);
  auto path = write_report(dir.path(), r);
  CHECK(path == dir.file("Forest_restoration_0.53.report.txt"));
  CHECK(io::exists(dir.file("Forest_restoration_0.53.report.json")));
  auto j = nlohmann::json::parse(io::read_file(dir.file("Forest_restoration_0.53.report.json")));
  CHECK(j["label"] == "Forest restoration");
  CHECK(j["threshold"] == 0.53);
}

}  // namespace
}  // namespace polir
