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

// Document ingestion and preprocessing: page splitting, rule-based cleaning,
// document-aware spelling correction and paragraph/sentence segmentation.

#ifndef POLIR_CORPUS_H_
#define POLIR_CORPUS_H_

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

namespace polir {

struct DocumentMeta {
  std::string doc_id;
  std::string country;
  std::string sector;
  std::string title;
};

struct Paragraph {
  std::string para_id;
  std::string doc_id;
  int page_number = 0;  // 1-based
  std::vector<std::string> sentences;
  std::vector<std::string> tokens;

  // Sentences joined by single spaces.
  std::string text() const;
};

struct Correction {
  std::string original;
  std::string replacement;
  int occurrences = 0;
};

struct Document {
  DocumentMeta meta;
  // Pages as ingested; kept for back-reference from reports.
  std::vector<std::string> raw_pages;
  // Pages after cleaning and correction. Equal to raw_pages right after
  // ingest().
  std::vector<std::string> pages;
  std::vector<Paragraph> paragraphs;
  std::vector<Correction> corrections;
  // Short trailing fragments removed by segment(), kept so every character
  // of the cleaned text stays accounted for.
  struct Fragment {
    int page_number = 0;
    std::string text;
  };
  std::vector<Fragment> dropped_fragments;

  const std::string &doc_id() const { return meta.doc_id; }
};

// Ordered (pattern, replacement) rules applied to every page. Patterns are
// ECMAScript regular expressions evaluated in multiline mode.
class CleaningRules {
 public:
  struct Rule {
    std::string pattern;
    std::string replacement;
  };

  CleaningRules() = default;
  explicit CleaningRules(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  // Standalone page numbers, bracketed and author-year citations, ALL-CAPS
  // header lines.
  static CleaningRules defaults();

  static CleaningRules from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;

  // Throws Error(kConfig) naming the first pattern that fails to compile.
  void validate() const;

  const std::vector<Rule> &rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

// Known-word list used by the spelling corrector.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string> &words);

  void insert(const std::string &word);
  bool contains(const std::string &word) const { return words_.count(word) > 0; }
  bool empty() const { return words_.empty(); }
  size_t size() const { return words_.size(); }

  // Words whose length is within `slack` of `length`.
  void for_each_near_length(size_t length, size_t slack,
                            const std::function<void(const std::string &)> &fn) const;

 private:
  std::unordered_set<std::string> words_;
  std::map<size_t, std::vector<std::string>> by_length_;
};

struct SpellOptions {
  int max_distance = 2;
  // Tokens shorter than this are never corrected.
  size_t min_token_length = 4;
  // Only lexicon words that occur in the document itself are candidates.
  bool require_in_document = true;
};

struct SegmentOptions {
  int min_paragraph_tokens = 8;
  std::set<std::string> abbreviations = default_abbreviations();

  static std::set<std::string> default_abbreviations();
};

Document ingest(std::string_view text, const DocumentMeta &meta,
                std::string_view page_delimiter = "\f");

std::string clean_text(std::string_view text, const CleaningRules &rules);
Document clean(const Document &doc, const CleaningRules &rules);

Document correct_spelling(const Document &doc, const Lexicon &lexicon,
                          const SpellOptions &options = {});

Document segment(const Document &doc, const SegmentOptions &options = {});

// Lowercased tokens; punctuation stripped, numerals kept.
std::vector<std::string> tokenize(std::string_view text);

// Calls fn(begin, end) with byte offsets of each token span in `text`.
void for_each_token_span(std::string_view text,
                         const std::function<void(size_t, size_t)> &fn);

std::vector<std::string> split_sentences(std::string_view text,
                                         const std::set<std::string> &abbreviations);

// Levenshtein distance, or limit + 1 once the distance is known to exceed
// `limit`.
int edit_distance(std::string_view a, std::string_view b, int limit);

// Documents keyed by unique doc_id, in insertion order.
class Corpus {
 public:
  void add(Document doc);
  const Document *find(const std::string &doc_id) const;
  const std::vector<Document> &documents() const { return docs_; }
  std::vector<Document> &documents() { return docs_; }
  size_t size() const { return docs_.size(); }
  size_t paragraph_count() const;

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, size_t> index_;
};

struct ManifestEntry {
  DocumentMeta meta;
  std::string path;
};

// CSV with header doc_id,country,sector,title,path. Relative paths are
// resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::string &path);
void write_manifest(const std::string &path, const std::vector<ManifestEntry> &entries);

// Segmented corpus: one JSON record per line per paragraph (corpus.jsonl)
// plus one record per document with metadata and pages (documents.jsonl).
void write_segmented(const Corpus &corpus, const std::string &dir);
Corpus read_segmented(const std::string &dir);

nlohmann::json paragraph_to_json(const Paragraph &p);

}  // namespace polir

#endif  // POLIR_CORPUS_H_
