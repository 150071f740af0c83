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

#include "polir/phraser.h"

#include <algorithm>
#include <cstdio>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

namespace {

constexpr size_t kMaxPhraseWords = 3;

size_t word_count(const std::string &token) {
  return static_cast<size_t>(std::count(token.begin(), token.end(), kPhraseJoiner)) + 1;
}

struct PairHash {
  size_t operator()(const PhraseTable::Pair &p) const {
    return std::hash<std::string>()(p.first) * 1000003u ^ std::hash<std::string>()(p.second);
  }
};

}  // namespace

std::vector<std::string> split_phrase(const std::string &token) {
  return io::split(token, kPhraseJoiner);
}

const PhraseTable::Merge *PhraseTable::find(const std::string &a, const std::string &b) const {
  auto it = merges_.find({a, b});
  return it == merges_.end() ? nullptr : &it->second;
}

std::vector<std::string> PhraseTable::apply_pass(const std::vector<std::string> &tokens, int pass) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size()) {
      const Merge *m = find(tokens[i], tokens[i + 1]);
      if (m && m->pass == pass) {
        out.push_back(m->merged);
        i += 2;
        continue;
      }
    }
    out.push_back(tokens[i]);
    ++i;
  }
  return out;
}

std::vector<std::string> PhraseTable::apply(const std::vector<std::string> &tokens) const {
  std::vector<std::string> cur = tokens;
  for (int pass = 1; pass <= pass_count_; ++pass) cur = apply_pass(cur, pass);
  return cur;
}

PhraseTable learn_phrases(const std::vector<TokenStream> &corpus, const PhraseConfig &config) {
  if (config.passes < 1 || config.passes > 2) {
    throw Error(ErrorCode::kConfig, "phrase passes must be 1 or 2, got " + std::to_string(config.passes));
  }
  if (config.min_pair_count < 1) {
    throw Error(ErrorCode::kConfig, "min_pair_count must be >= 1");
  }
  PhraseTable table;
  table.score_threshold_ = config.score_threshold;
  table.min_pair_count_ = config.min_pair_count;

  std::vector<TokenStream> streams = corpus;
  for (int pass = 1; pass <= config.passes; ++pass) {
    std::unordered_map<std::string, long> unigrams;
    std::unordered_map<PhraseTable::Pair, long, PairHash> pairs;
    for (const auto &s : streams) {
      for (size_t i = 0; i < s.size(); ++i) {
        ++unigrams[s[i]];
        if (i + 1 < s.size()) ++pairs[{s[i], s[i + 1]}];
      }
    }
    const double vocab = static_cast<double>(unigrams.size());
    for (const auto &[pair, count] : pairs) {
      if (count < config.min_pair_count) continue;
      if (table.merges_.count(pair)) continue;
      if (word_count(pair.first) + word_count(pair.second) > kMaxPhraseWords) continue;
      double score = static_cast<double>(count - config.min_pair_count) * vocab /
                     (static_cast<double>(unigrams[pair.first]) * static_cast<double>(unigrams[pair.second]));
      if (score <= config.score_threshold) continue;
      table.merges_.emplace(pair, PhraseTable::Merge{pair.first + kPhraseJoiner + pair.second, score, count, pass});
    }
    table.pass_count_ = pass;
    if (pass < config.passes) {
      for (auto &s : streams) s = table.apply_pass(s, pass);
    }
  }
  return table;
}

std::string PhraseTable::serialize() const {
  std::string out;
  for (int pass = 1; pass <= pass_count_; ++pass) {
    out += "# pass " + std::to_string(pass) + "\n";
    for (const auto &[pair, m] : merges_) {
      if (m.pass != pass) continue;
      out += pair.first + " " + pair.second + " " + io::format_real(m.score) + "\n";
    }
  }
  return out;
}

PhraseTable PhraseTable::parse(const std::string &text) {
  PhraseTable table;
  table.pass_count_ = 1;
  table.score_threshold_ = 0.0;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int marked_pass = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = io::trim(line);
    if (trimmed.empty()) continue;
    if (trimmed[0] == '#') {
      int p = 0;
      if (std::sscanf(trimmed.c_str(), "# pass %d", &p) == 1) {
        if (p < 1 || p > 2) throw Error(ErrorCode::kParse, "phrase table line " + std::to_string(lineno) + ": bad pass");
        marked_pass = p;
        table.pass_count_ = std::max(table.pass_count_, p);
      }
      continue;
    }
    std::istringstream fields(trimmed);
    std::string a, b, score_text, extra;
    if (!(fields >> a >> b >> score_text) || (fields >> extra)) {
      throw Error(ErrorCode::kParse, "phrase table line " + std::to_string(lineno) + ": expected 'token_a token_b score'");
    }
    double score = 0.0;
    auto res = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
    if (res.ec != std::errc() || res.ptr != score_text.data() + score_text.size()) {
      throw Error(ErrorCode::kParse, "phrase table line " + std::to_string(lineno) + ": bad score '" + score_text + "'");
    }
    int pass = marked_pass;
    if (pass == 0) pass = (word_count(a) > 1 || word_count(b) > 1) ? 2 : 1;
    table.pass_count_ = std::max(table.pass_count_, pass);
    table.merges_[{a, b}] = Merge{a + kPhraseJoiner + b, score, 0, pass};
  }
  return table;
}

void PhraseTable::save(const std::string &path) const { io::write_file(path, serialize()); }

PhraseTable PhraseTable::load(const std::string &path) { return parse(io::read_file(path)); }

}  // namespace polir
