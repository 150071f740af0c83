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

#include "polir/corpus.h"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"
#include "polir/io.h"
#include "test_util.h"

namespace polir {
namespace {

using testing::Gen;
using testing::ScratchDir;

DocumentMeta meta(const std::string &id) { return {id, "KE", "forestry", "Title " + id}; }

// Plain recursive Levenshtein with memoisation.
int levenshtein_oracle(const std::string &a, const std::string &b) {
  std::vector<std::vector<int>> memo(a.size() + 1, std::vector<int>(b.size() + 1, -1));
  std::function<int(size_t, size_t)> d = [&](size_t i, size_t j) -> int {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    int &m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return m;
  };
  return d(a.size(), b.size());
}

std::string strip_space(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\n' && c != '\t' && c != '\r') out.push_back(c);
  }
  return out;
}

TEST_CASE("ingest splits pages on the delimiter") {
  Document d = ingest("p1\fp2", meta("d1"));
  REQUIRE(d.raw_pages.size() == 2);
  CHECK(d.raw_pages[0] == "p1");
  CHECK(d.raw_pages[1] == "p2");
  CHECK(d.pages == d.raw_pages);

  Document custom = ingest("a<PAGE>b<PAGE>c", meta("d2"), "<PAGE>");
  CHECK(custom.pages.size() == 3);
}

TEST_CASE("ingest rejects empty input") {
  CHECK_ERROR_CODE(ingest("", meta("d1")), ErrorCode::kIngestion);
  CHECK_ERROR_CODE(ingest("text", meta("")), ErrorCode::kIngestion);
}

TEST_CASE("corpus rejects duplicate document ids") {
  Corpus c;
  c.add(ingest("x", meta("d1")));
  CHECK_ERROR_CODE(c.add(ingest("y", meta("d1"))), ErrorCode::kConflict);
  CHECK(c.size() == 1);
  CHECK(c.find("d1") != nullptr);
  CHECK(c.find("d2") == nullptr);
}

TEST_CASE("clean removes standalone page numbers") {
  CHECK(clean_text("Intro\n42\nText", CleaningRules::defaults()) == "Intro\nText");
  CHECK(clean_text("Intro\nPage 3 of 10\nText", CleaningRules::defaults()) == "Intro\nText");
}

TEST_CASE("clean removes citations and header lines") {
  auto rules = CleaningRules::defaults();
  CHECK(clean_text("Forests matter [3].", rules) == "Forests matter.");
  CHECK(clean_text("Forests matter [4, 7].", rules) == "Forests matter.");
  CHECK(clean_text("Forests matter (Smith, 2010).", rules) == "Forests matter.");
  CHECK(clean_text("Forests matter (Holl et al., 2017; Gao 2017).", rules) == "Forests matter.");
  CHECK(clean_text("2.1 FOREST POLICY\nThe ministry acts.", rules) == "The ministry acts.");
  // Mixed-case lines and acronyms inside sentences survive.
  CHECK(clean_text("The FAO report is long.", rules) == "The FAO report is long.");
}

TEST_CASE("clean is idempotent on generated pages") {
  Gen g(7);
  auto rules = CleaningRules::defaults();
  const std::vector<std::string> pieces = {"Page 4", "12", "SECTION ONE", "The forest [2] grows.",
                                           "(Smith, 2001)", "Rivers flow (Lee and Park, 1999).",
                                           "Budget of 3.5 million", "", "  ", "ANNEX", "x"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string page;
    int lines = g.integer(1, 12);
    for (int i = 0; i < lines; ++i) {
      page += g.pick(pieces);
      if (g.coin(0.3)) page += " " + g.word(1, 8);
      page += "\n";
    }
    std::string once = clean_text(page, rules);
    CHECK(clean_text(once, rules) == once);
  }
}

TEST_CASE("malformed cleaning pattern names the pattern") {
  nlohmann::json j = nlohmann::json::array({{{"pattern", "([a-z"}, {"replacement", ""}}});
  try {
    CleaningRules::from_json(j);
    FAIL("expected error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("([a-z") != std::string::npos);
  }
  auto round = CleaningRules::from_json(CleaningRules::defaults().to_json());
  CHECK(round.rules().size() == CleaningRules::defaults().rules().size());
}

TEST_CASE("spelling corrects to the frequent in-document neighbour") {
  std::string text;
  for (int i = 0; i < 40; ++i) text += "the forest ";
  text += "a forrest here";
  Lexicon lex({"the", "forest", "here", "fortress"});
  Document d = correct_spelling(ingest(text, meta("d1")), lex);
  CHECK(d.pages[0].find("forrest") == std::string::npos);
  REQUIRE(d.corrections.size() == 1);
  CHECK(d.corrections[0].original == "forrest");
  CHECK(d.corrections[0].replacement == "forest");
  CHECK(d.corrections[0].occurrences == 1);
  CHECK(levenshtein_oracle("forrest", "forest") <= 2);
}

TEST_CASE("spelling keeps case and ignores short or known tokens") {
  Lexicon lex({"forest", "is"});
  Document d = correct_spelling(ingest("forest Forrest FORREST iz", meta("d1")), lex);
  CHECK(d.pages[0] == "forest Forest FOREST iz");
}

TEST_CASE("spelling leaves tokens without an in-document candidate") {
  Lexicon lex({"forest"});
  Document d = correct_spelling(ingest("forrest only", meta("d1")), lex);
  CHECK(d.pages[0] == "forrest only");
  SpellOptions open;
  open.require_in_document = false;
  d = correct_spelling(ingest("forrest only", meta("d1")), lex, open);
  CHECK(d.pages[0] == "forest only");
}

TEST_CASE("edit distance agrees with the recursive oracle") {
  Gen g(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string a = g.word(0, 7, "abc"), b = g.word(0, 7, "abc");
    int limit = g.integer(0, 4);
    int expected = std::min(levenshtein_oracle(a, b), limit + 1);
    CHECK(edit_distance(a, b, limit) == expected);
  }
}

TEST_CASE("segment splits paragraphs and sentences") {
  SegmentOptions opt;
  opt.min_paragraph_tokens = 1;
  Document d = segment(ingest("A dog. It ran.\n\nNew para.", meta("d1")), opt);
  REQUIRE(d.paragraphs.size() == 2);
  CHECK(d.paragraphs[0].sentences == std::vector<std::string>{"A dog.", "It ran."});
  CHECK(d.paragraphs[1].sentences == std::vector<std::string>{"New para."});
  CHECK(d.paragraphs[0].para_id == "d1.p0001");
  CHECK(d.paragraphs[1].para_id == "d1.p0002");
  CHECK(d.paragraphs[0].tokens == std::vector<std::string>{"a", "dog", "it", "ran"});
}

TEST_CASE("abbreviations do not end sentences") {
  auto s = split_sentences("See Dr. Smith today.", SegmentOptions::default_abbreviations());
  CHECK(s.size() == 1);
  s = split_sentences("As Holl et al. Show here. Next one.", SegmentOptions::default_abbreviations());
  CHECK(s.size() == 2);
}

TEST_CASE("short blocks merge forward and trailing ones are kept aside") {
  SegmentOptions opt;
  opt.min_paragraph_tokens = 4;
  Document d = segment(ingest("Short.\n\nThis block has enough words.\n\nTail bit.", meta("d1")), opt);
  REQUIRE(d.paragraphs.size() == 1);
  CHECK(d.paragraphs[0].text() == "Short. This block has enough words.");
  REQUIRE(d.dropped_fragments.size() == 1);
  CHECK(d.dropped_fragments[0].text == "Tail bit.");
  CHECK(d.dropped_fragments[0].page_number == 1);
}

TEST_CASE("paragraphs carry their page of origin") {
  SegmentOptions opt;
  opt.min_paragraph_tokens = 2;
  Document d = segment(ingest("First page words.\fSecond page words.\n\nMore words here.", meta("d9")), opt);
  REQUIRE(d.paragraphs.size() == 3);
  CHECK(d.paragraphs[0].page_number == 1);
  CHECK(d.paragraphs[1].page_number == 2);
  CHECK(d.paragraphs[2].page_number == 2);
  for (const auto &p : d.paragraphs) CHECK(p.doc_id == "d9");
}

TEST_CASE("segmentation accounts for every non-blank character of each page") {
  Gen g(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int pages = g.integer(1, 3);
    for (int p = 0; p < pages; ++p) {
      if (p) text += "\f";
      int blocks = g.integer(1, 5);
      for (int b = 0; b < blocks; ++b) {
        int words = g.integer(1, 14);
        for (int w = 0; w < words; ++w) {
          text += g.word(1, 6);
          text += g.coin(0.15) ? ". " : (g.coin(0.1) ? "\n" : " ");
        }
        text += g.coin(0.5) ? "\n\n" : "\n \n\n";
      }
    }
    SegmentOptions opt;
    opt.min_paragraph_tokens = g.integer(1, 10);
    Document d = segment(ingest(text, meta("d")), opt);
    for (size_t p = 0; p < d.pages.size(); ++p) {
      std::string rebuilt;
      for (const auto &para : d.paragraphs) {
        if (para.page_number == static_cast<int>(p) + 1) rebuilt += para.text();
      }
      for (const auto &f : d.dropped_fragments) {
        if (f.page_number == static_cast<int>(p) + 1) rebuilt += f.text;
      }
      CHECK(strip_space(rebuilt) == strip_space(d.pages[p]));
    }
    for (const auto &para : d.paragraphs) CHECK(static_cast<int>(para.tokens.size()) >= opt.min_paragraph_tokens);
  }
}

TEST_CASE("tokenize lowercases and strips punctuation") {
  CHECK(tokenize("The Forest's edge, (2019) - really!") ==
        std::vector<std::string>{"the", "forest", "edge", "2019", "really"});
  CHECK(tokenize("agro-forestry covers 3.5 million ha") ==
        std::vector<std::string>{"agro-forestry", "covers", "3.5", "million", "ha"});
  CHECK(tokenize("\xE2\x80\x9Cquoted\xE2\x80\x9D text") == std::vector<std::string>{"quoted", "text"});
  CHECK(tokenize("caf\xC3\xA9 au lait") == std::vector<std::string>{"caf\xC3\xA9", "au", "lait"});
  CHECK(tokenize("").empty());
}

TEST_CASE("manifest round-trips and resolves relative paths") {
  ScratchDir dir("manifest");
  std::vector<ManifestEntry> entries = {{{"d1", "KE", "energy", "A, with comma"}, "docs/d1.txt"},
                                        {{"d2", "UG", "water", "Plain"}, "/abs/d2.txt"}};
  write_manifest(dir.file("m.csv"), entries);
  auto back = read_manifest(dir.file("m.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].meta.title == "A, with comma");
  CHECK(back[0].path == io::join_path(dir.path(), "docs/d1.txt"));
  CHECK(back[1].path == "/abs/d2.txt");
  CHECK_ERROR_CODE(read_manifest(dir.file("missing.csv")), ErrorCode::kMissingInput);
}

TEST_CASE("segmented corpus round-trips") {
  ScratchDir dir("segmented");
  SegmentOptions opt;
  opt.min_paragraph_tokens = 2;
  Corpus c;
  Document d = segment(ingest("One two three.\n\nFour five six.\fSeven eight.\n\nx", meta("d1")), opt);
  d.corrections.push_back({"forrest", "forest", 2});
  c.add(d);
  c.add(segment(ingest("Nine ten eleven.", meta("d2")), opt));
  write_segmented(c, dir.path());
  Corpus back = read_segmented(dir.path());
  REQUIRE(back.size() == 2);
  CHECK(back.paragraph_count() == c.paragraph_count());
  const Document *b1 = back.find("d1");
  REQUIRE(b1);
  CHECK(b1->pages == d.pages);
  CHECK(b1->raw_pages == d.raw_pages);
  REQUIRE(b1->corrections.size() == 1);
  CHECK(b1->corrections[0].occurrences == 2);
  REQUIRE(b1->dropped_fragments.size() == 1);
  CHECK(b1->dropped_fragments[0].page_number == 2);
  for (size_t i = 0; i < d.paragraphs.size(); ++i) {
    CHECK(b1->paragraphs[i].para_id == d.paragraphs[i].para_id);
    CHECK(b1->paragraphs[i].tokens == d.paragraphs[i].tokens);
    CHECK(b1->paragraphs[i].sentences == d.paragraphs[i].sentences);
    CHECK(b1->paragraphs[i].page_number == d.paragraphs[i].page_number);
  }
}

TEST_CASE("segmented reader reports malformed lines") {
  ScratchDir dir("badseg");
  io::write_file(dir.file("documents.jsonl"), "{\"doc_id\": \"d1\", \"raw_pages\": [\"a\"], \"pages\": [\"a\"]}\n");
  io::write_file(dir.file("corpus.jsonl"), "{not json}\n");
  CHECK_ERROR_CODE(read_segmented(dir.path()), ErrorCode::kParse);
}

}  // namespace
}  // namespace polir
