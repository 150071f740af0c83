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
#include <cctype>
#include <cstdlib>
#include <cstdio>
#include <regex>
#include <sstream>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

namespace {

// Bound on rule passes when cleaning to a fixed point.
constexpr int kMaxCleaningPasses = 16;

bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Length of a UTF-8 punctuation sequence starting at i, or 0. Covers the
// Latin-1 supplement symbols (U+0080..U+00BF) and general punctuation
// (U+2000..U+207F): curly quotes, dashes, bullets, non-breaking space.
size_t utf8_punct_len(std::string_view s, size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  if (c == 0xC2 && i + 1 < s.size()) return 2;
  if (c == 0xE2 && i + 2 < s.size()) {
    auto c1 = static_cast<unsigned char>(s[i + 1]);
    if (c1 == 0x80 || c1 == 0x81) return 3;
  }
  return 0;
}

bool is_token_byte(std::string_view s, size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  if (is_ascii_alnum(c)) return true;
  if (c >= 0x80) {
    // Continuation bytes belong to whatever started the sequence; callers
    // only ask about lead bytes.
    return utf8_punct_len(s, i) == 0;
  }
  return false;
}

// Advance over one code point.
size_t step(std::string_view s, size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  size_t n = 1;
  if (c >= 0xF0) n = 4;
  else if (c >= 0xE0) n = 3;
  else if (c >= 0xC0) n = 2;
  return std::min(s.size(), i + n);
}

bool is_apostrophe_at(std::string_view s, size_t i, size_t *len) {
  if (s[i] == '\'') {
    *len = 1;
    return true;
  }
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      static_cast<unsigned char>(s[i + 2]) == 0x99) {
    *len = 3;
    return true;
  }
  return false;
}

bool all_ascii_alpha(std::string_view s) {
  for (unsigned char c : s) {
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
  }
  return !s.empty();
}

std::string match_case(std::string_view original, const std::string &replacement) {
  std::string out = replacement;
  bool all_upper = std::all_of(original.begin(), original.end(),
                               [](char c) { return is_upper(static_cast<unsigned char>(c)); });
  if (all_upper && original.size() > 1) {
    for (char &c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (!original.empty() && is_upper(static_cast<unsigned char>(original[0])) && !out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::vector<std::regex> compile_rules(const CleaningRules &rules) {
  std::vector<std::regex> compiled;
  compiled.reserve(rules.rules().size());
  for (const auto &rule : rules.rules()) {
    try {
      compiled.emplace_back(rule.pattern, std::regex::ECMAScript | std::regex::multiline);
    } catch (const std::regex_error &e) {
      throw Error(ErrorCode::kConfig, "malformed cleaning pattern '" + rule.pattern + "': " + e.what());
    }
  }
  return compiled;
}

}  // namespace

std::string Paragraph::text() const {
  std::string out;
  for (const auto &s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// CleaningRules

CleaningRules CleaningRules::defaults() {
  return CleaningRules({
      // Standalone page numbers: "42", "Page 3", "page 3 of 10".
      {R"(^[ \t]*(?:[Pp]age[ \t]+)?\d{1,4}(?:[ \t]+of[ \t]+\d{1,4})?[ \t]*(?:\n|$))", ""},
      // Numeric citations: [3], [4, 7], [2-5].
      {R"([ \t]*\[\d{1,3}(?:[ \t]*(?:,|-|–)[ \t]*\d{1,3})*\])", ""},
      // Author-year citations: (Smith, 2010), (Holl et al., 2017; Gao 2017).
      {R"([ \t]*\((?:[A-Z][A-Za-z'\-]+(?: et al\.)?(?: (?:and|&) [A-Z][A-Za-z'\-]+)?,? \d{4}[a-z]?(?:; ?)?)+\))", ""},
      // ALL-CAPS header lines, optionally numbered: "2.1 FOREST POLICY".
      {R"(^[ \t]*(?:\d+(?:\.\d+)*\.?[ \t]+)?[A-Z][A-Z0-9 ,:;&'()\-]*[A-Z][ \t.:]*(?:\n|$))", ""},
  });
}

CleaningRules CleaningRules::from_json(const nlohmann::json &j) {
  if (!j.is_array()) throw Error(ErrorCode::kConfig, "cleaning rules must be a JSON array");
  std::vector<Rule> rules;
  for (const auto &item : j) {
    if (!item.is_object() || !item.contains("pattern") || !item["pattern"].is_string()) {
      throw Error(ErrorCode::kConfig, "cleaning rule needs a string 'pattern'");
    }
    rules.push_back({item["pattern"].get<std::string>(), item.value("replacement", std::string())});
  }
  CleaningRules out(std::move(rules));
  out.validate();
  return out;
}

nlohmann::json CleaningRules::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &r : rules_) j.push_back({{"pattern", r.pattern}, {"replacement", r.replacement}});
  return j;
}

void CleaningRules::validate() const { compile_rules(*this); }

// ---------------------------------------------------------------------------
// Lexicon

Lexicon::Lexicon(const std::vector<std::string> &words) {
  for (const auto &w : words) insert(w);
}

void Lexicon::insert(const std::string &word) {
  if (word.empty()) return;
  if (words_.insert(word).second) by_length_[word.size()].push_back(word);
}

void Lexicon::for_each_near_length(size_t length, size_t slack,
                                   const std::function<void(const std::string &)> &fn) const {
  size_t lo = length > slack ? length - slack : 0;
  for (auto it = by_length_.lower_bound(lo); it != by_length_.end() && it->first <= length + slack; ++it) {
    for (const auto &w : it->second) fn(w);
  }
}

// ---------------------------------------------------------------------------
// Tokenization

void for_each_token_span(std::string_view text, const std::function<void(size_t, size_t)> &fn) {
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    if (!is_token_byte(text, i)) {
      size_t plen = static_cast<unsigned char>(text[i]) >= 0x80 ? utf8_punct_len(text, i) : 1;
      i += std::max<size_t>(plen, 1);
      continue;
    }
    size_t begin = i;
    while (i < n) {
      if (is_token_byte(text, i)) {
        i = step(text, i);
        continue;
      }
      // Connectors kept inside a token: intra-word hyphen, decimal point or
      // thousands separator between digits.
      char c = text[i];
      if (i + 1 < n && i > begin) {
        auto prev = static_cast<unsigned char>(text[i - 1]);
        auto next = static_cast<unsigned char>(text[i + 1]);
        if (c == '-' && is_token_byte(text, i + 1) && !is_digit(prev) && !is_digit(next)) {
          ++i;
          continue;
        }
        if ((c == '.' || c == ',') && is_digit(prev) && is_digit(next)) {
          ++i;
          continue;
        }
      }
      break;
    }
    fn(begin, i);
    // Possessive 's is not a token of its own.
    size_t alen = 0;
    if (i < n && is_apostrophe_at(text, i, &alen)) {
      size_t j = i + alen;
      if (j < n && (text[j] == 's' || text[j] == 'S') && (j + 1 >= n || !is_token_byte(text, j + 1))) {
        i = j + 1;
      }
    }
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for_each_token_span(text, [&](size_t b, size_t e) { tokens.push_back(io::lower(text.substr(b, e - b))); });
  return tokens;
}

std::set<std::string> SegmentOptions::default_abbreviations() {
  return {"Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "St.", "No.", "Nos.", "Fig.", "Figs.", "Art.",
          "Sec.", "Cap.", "Vol.", "pp.", "p.", "vs.", "etc.", "e.g.", "i.e.", "et al.", "al.",
          "Inc.", "Ltd.", "Co.", "Gov.", "Hon.", "Jan.", "Feb.", "Mar.", "Apr.", "Jun.", "Jul.",
          "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.", "approx.", "cf.", "Rev.", "Para."};
}

std::vector<std::string> split_sentences(std::string_view text,
                                         const std::set<std::string> &abbreviations) {
  std::vector<std::string> sentences;
  size_t start = 0;
  const size_t n = text.size();
  auto emit = [&](size_t end) {
    std::string s = collapse_whitespace(text.substr(start, end - start));
    if (!s.empty()) sentences.push_back(std::move(s));
    start = end;
  };
  for (size_t i = 0; i < n; ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    size_t j = i + 1;
    while (j < n && (text[j] == '"' || text[j] == '\'' || text[j] == ')' || text[j] == ']')) ++j;
    if (j >= n || !is_space(static_cast<unsigned char>(text[j]))) continue;
    size_t k = j;
    while (k < n && is_space(static_cast<unsigned char>(text[k]))) ++k;
    while (k < n && (text[k] == '"' || text[k] == '\'' || text[k] == '(')) ++k;
    if (k >= n || !is_upper(static_cast<unsigned char>(text[k]))) continue;
    if (c == '.') {
      size_t w = i;
      while (w > start && !is_space(static_cast<unsigned char>(text[w - 1]))) --w;
      std::string word(text.substr(w, i + 1 - w));
      if (abbreviations.count(word)) continue;
      // Two-word abbreviations such as "et al."
      size_t w2 = w;
      while (w2 > start && is_space(static_cast<unsigned char>(text[w2 - 1]))) --w2;
      size_t w3 = w2;
      while (w3 > start && !is_space(static_cast<unsigned char>(text[w3 - 1]))) --w3;
      if (w3 < w2 && abbreviations.count(std::string(text.substr(w3, w2 - w3)) + " " + word)) continue;
    }
    emit(j);
  }
  if (start < n) emit(n);
  return sentences;
}

int edit_distance(std::string_view a, std::string_view b, int limit) {
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  if (std::abs(la - lb) > limit) return limit + 1;
  std::vector<int> prev(lb + 1), cur(lb + 1);
  for (int j = 0; j <= lb; ++j) prev[j] = j;
  for (int i = 1; i <= la; ++i) {
    cur[0] = i;
    int row_min = cur[0];
    for (int j = 1; j <= lb; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > limit) return limit + 1;
    std::swap(prev, cur);
  }
  return std::min(prev[lb], limit + 1);
}

// ---------------------------------------------------------------------------
// Pipeline steps

Document ingest(std::string_view text, const DocumentMeta &meta, std::string_view page_delimiter) {
  if (meta.doc_id.empty()) throw Error(ErrorCode::kIngestion, "document id is empty");
  if (text.empty()) throw Error(ErrorCode::kIngestion, "document '" + meta.doc_id + "' has no text");
  if (page_delimiter.empty()) throw Error(ErrorCode::kConfig, "page delimiter is empty");
  Document doc;
  doc.meta = meta;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(page_delimiter, start);
    if (pos == std::string_view::npos) {
      doc.raw_pages.emplace_back(text.substr(start));
      break;
    }
    doc.raw_pages.emplace_back(text.substr(start, pos - start));
    start = pos + page_delimiter.size();
  }
  doc.pages = doc.raw_pages;
  return doc;
}

namespace {

std::string apply_rules_once(std::string text, const std::vector<std::regex> &compiled,
                             const CleaningRules &rules) {
  for (size_t r = 0; r < compiled.size(); ++r) {
    text = std::regex_replace(text, compiled[r], rules.rules()[r].replacement);
  }
  return text;
}

std::string clean_with(std::string_view text, const std::vector<std::regex> &compiled,
                       const CleaningRules &rules) {
  // Rules run in order, repeated until nothing changes, so cleaning is
  // idempotent even when one removal exposes a new match.
  std::string cur(text);
  for (int pass = 0; pass < kMaxCleaningPasses; ++pass) {
    std::string next = apply_rules_once(cur, compiled, rules);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

std::string clean_text(std::string_view text, const CleaningRules &rules) {
  return clean_with(text, compile_rules(rules), rules);
}

Document clean(const Document &doc, const CleaningRules &rules) {
  auto compiled = compile_rules(rules);
  Document out = doc;
  for (auto &page : out.pages) page = clean_with(page, compiled, rules);
  return out;
}

Document correct_spelling(const Document &doc, const Lexicon &lexicon, const SpellOptions &options) {
  if (lexicon.empty()) throw Error(ErrorCode::kConfig, "spelling lexicon is empty");
  std::unordered_map<std::string, int> freq;
  for (const auto &page : doc.pages) {
    for_each_token_span(page, [&](size_t b, size_t e) { ++freq[io::lower(std::string_view(page).substr(b, e - b))]; });
  }

  // Decide replacements per distinct out-of-lexicon token.
  std::map<std::string, std::string> replacements;
  for (const auto &[token, count] : freq) {
    if (lexicon.contains(token) || token.size() < options.min_token_length || !all_ascii_alpha(token)) continue;
    const std::string *best = nullptr;
    int best_freq = -1;
    lexicon.for_each_near_length(token.size(), static_cast<size_t>(options.max_distance), [&](const std::string &cand) {
      auto it = freq.find(cand);
      int f = it == freq.end() ? 0 : it->second;
      if (options.require_in_document && f == 0) return;
      if (f < best_freq || (f == best_freq && best && cand >= *best)) return;
      if (edit_distance(token, cand, options.max_distance) > options.max_distance) return;
      best = &cand;
      best_freq = f;
    });
    if (best) replacements.emplace(token, *best);
  }

  Document out = doc;
  if (replacements.empty()) return out;
  std::map<std::string, int> applied;
  for (auto &page : out.pages) {
    std::string rebuilt;
    size_t last = 0;
    for_each_token_span(page, [&](size_t b, size_t e) {
      std::string_view original = std::string_view(page).substr(b, e - b);
      auto it = replacements.find(io::lower(original));
      if (it == replacements.end()) return;
      rebuilt.append(page, last, b - last);
      rebuilt += match_case(original, it->second);
      last = e;
      ++applied[it->first];
    });
    rebuilt.append(page, last, std::string::npos);
    page = std::move(rebuilt);
  }
  for (const auto &[orig, n] : applied) out.corrections.push_back({orig, replacements[orig], n});
  return out;
}

Document segment(const Document &doc, const SegmentOptions &options) {
  Document out = doc;
  out.paragraphs.clear();
  out.dropped_fragments.clear();
  int ordinal = 0;
  for (size_t p = 0; p < out.pages.size(); ++p) {
    // Blocks separated by blank lines.
    std::vector<std::string> blocks;
    std::string current;
    std::istringstream lines(out.pages[p]);
    std::string line;
    while (std::getline(lines, line)) {
      if (io::trim(line).empty()) {
        if (!current.empty()) blocks.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (!current.empty()) current.push_back(' ');
      current += line;
    }
    if (!current.empty()) blocks.push_back(std::move(current));

    std::string pending;
    for (size_t b = 0; b < blocks.size(); ++b) {
      std::string text = pending.empty() ? collapse_whitespace(blocks[b])
                                         : pending + " " + collapse_whitespace(blocks[b]);
      pending.clear();
      if (text.empty()) continue;
      auto tokens = tokenize(text);
      if (static_cast<int>(tokens.size()) < options.min_paragraph_tokens) {
        if (b + 1 < blocks.size()) {
          pending = std::move(text);
        } else {
          out.dropped_fragments.push_back({static_cast<int>(p) + 1, std::move(text)});
        }
        continue;
      }
      Paragraph para;
      para.doc_id = out.meta.doc_id;
      para.page_number = static_cast<int>(p) + 1;
      char id[32];
      std::snprintf(id, sizeof(id), ".p%04d", ++ordinal);
      para.para_id = out.meta.doc_id + id;
      para.sentences = split_sentences(text, options.abbreviations);
      para.tokens = std::move(tokens);
      out.paragraphs.push_back(std::move(para));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus

void Corpus::add(Document doc) {
  if (doc.meta.doc_id.empty()) throw Error(ErrorCode::kIngestion, "document id is empty");
  if (index_.count(doc.meta.doc_id)) {
    throw Error(ErrorCode::kConflict, "duplicate document id '" + doc.meta.doc_id + "'");
  }
  index_.emplace(doc.meta.doc_id, docs_.size());
  docs_.push_back(std::move(doc));
}

const Document *Corpus::find(const std::string &doc_id) const {
  auto it = index_.find(doc_id);
  return it == index_.end() ? nullptr : &docs_[it->second];
}

size_t Corpus::paragraph_count() const {
  size_t n = 0;
  for (const auto &d : docs_) n += d.paragraphs.size();
  return n;
}

// ---------------------------------------------------------------------------
// Files

std::vector<ManifestEntry> read_manifest(const std::string &path) {
  auto rows = io::parse_csv(io::read_file(path));
  if (rows.empty()) throw Error(ErrorCode::kValidation, "manifest " + path + " is empty");
  const auto &header = rows.front();
  auto column = [&](const std::string &name) -> size_t {
    for (size_t i = 0; i < header.size(); ++i) {
      if (io::trim(header[i]) == name) return i;
    }
    throw Error(ErrorCode::kValidation, "manifest " + path + " lacks column '" + name + "'");
  };
  size_t c_id = column("doc_id"), c_country = column("country"), c_sector = column("sector"),
         c_title = column("title"), c_path = column("path");
  std::string base = io::parent_dir(path);
  std::vector<ManifestEntry> entries;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    size_t need = std::max({c_id, c_country, c_sector, c_title, c_path});
    if (row.size() <= need) {
      throw Error(ErrorCode::kParse, "manifest " + path + " line " + std::to_string(r + 1) + ": too few fields");
    }
    ManifestEntry e;
    e.meta = {io::trim(row[c_id]), io::trim(row[c_country]), io::trim(row[c_sector]), row[c_title]};
    e.path = io::trim(row[c_path]);
    if (!e.path.empty() && e.path.front() != '/') e.path = io::join_path(base, e.path);
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::string &path, const std::vector<ManifestEntry> &entries) {
  std::string out = io::csv_line({"doc_id", "country", "sector", "title", "path"});
  for (const auto &e : entries) {
    out += io::csv_line({e.meta.doc_id, e.meta.country, e.meta.sector, e.meta.title, e.path});
  }
  io::write_file(path, out);
}

nlohmann::json paragraph_to_json(const Paragraph &p) {
  return {{"doc_id", p.doc_id},
          {"page_number", p.page_number},
          {"para_id", p.para_id},
          {"tokens", p.tokens},
          {"sentences", p.sentences}};
}

void write_segmented(const Corpus &corpus, const std::string &dir) {
  io::ensure_dir(dir);
  std::string paragraphs, documents;
  for (const auto &doc : corpus.documents()) {
    nlohmann::json corrections = nlohmann::json::array();
    for (const auto &c : doc.corrections) {
      corrections.push_back({{"original", c.original}, {"replacement", c.replacement}, {"occurrences", c.occurrences}});
    }
    nlohmann::json dropped = nlohmann::json::array();
    for (const auto &f : doc.dropped_fragments) dropped.push_back({{"page_number", f.page_number}, {"text", f.text}});
    nlohmann::json d = {{"doc_id", doc.meta.doc_id},   {"country", doc.meta.country},
                        {"sector", doc.meta.sector},   {"title", doc.meta.title},
                        {"raw_pages", doc.raw_pages},  {"pages", doc.pages},
                        {"corrections", corrections},  {"dropped_fragments", dropped}};
    documents += d.dump() + "\n";
    for (const auto &p : doc.paragraphs) paragraphs += paragraph_to_json(p).dump() + "\n";
  }
  io::write_file(io::join_path(dir, "documents.jsonl"), documents);
  io::write_file(io::join_path(dir, "corpus.jsonl"), paragraphs);
}

Corpus read_segmented(const std::string &dir) {
  Corpus corpus;
  auto parse_lines = [](const std::string &path, const std::function<void(const nlohmann::json &)> &fn) {
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (io::trim(line).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
        fn(j);
      } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::kParse, path + " line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  };
  parse_lines(io::join_path(dir, "documents.jsonl"), [&](const nlohmann::json &j) {
    Document doc;
    doc.meta = {j.at("doc_id").get<std::string>(), j.value("country", ""), j.value("sector", ""),
                j.value("title", "")};
    doc.raw_pages = j.at("raw_pages").get<std::vector<std::string>>();
    doc.pages = j.at("pages").get<std::vector<std::string>>();
    for (const auto &c : j.value("corrections", nlohmann::json::array())) {
      doc.corrections.push_back({c.at("original"), c.at("replacement"), c.at("occurrences")});
    }
    for (const auto &f : j.value("dropped_fragments", nlohmann::json::array())) {
      doc.dropped_fragments.push_back({f.at("page_number").get<int>(), f.at("text").get<std::string>()});
    }
    corpus.add(std::move(doc));
  });
  std::unordered_map<std::string, size_t> doc_index;
  for (size_t i = 0; i < corpus.size(); ++i) doc_index.emplace(corpus.documents()[i].meta.doc_id, i);
  parse_lines(io::join_path(dir, "corpus.jsonl"), [&](const nlohmann::json &j) {
    Paragraph p;
    p.doc_id = j.at("doc_id").get<std::string>();
    p.page_number = j.at("page_number").get<int>();
    p.para_id = j.at("para_id").get<std::string>();
    p.tokens = j.at("tokens").get<std::vector<std::string>>();
    p.sentences = j.value("sentences", std::vector<std::string>{});
    auto pos = doc_index.find(p.doc_id);
    if (pos == doc_index.end()) throw Error(ErrorCode::kValidation, "paragraph " + p.para_id + " references unknown document");
    Document *it = &corpus.documents()[pos->second];
    if (p.page_number < 1 || p.page_number > static_cast<int>(it->pages.size())) {
      throw Error(ErrorCode::kValidation, "paragraph " + p.para_id + " references missing page");
    }
    it->paragraphs.push_back(std::move(p));
  });
  return corpus;
}

}  // namespace polir
