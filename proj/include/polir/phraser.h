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

// Bigram/trigram detection. Adjacent pairs are scored with
//
//   score(a, b) = (count(ab) - min_pair_count) * V / (count(a) * count(b))
//
// where V is the number of distinct tokens in the stream. A second pass over
// the rewritten stream joins bigrams with a neighbouring unigram.

#ifndef POLIR_PHRASER_H_
#define POLIR_PHRASER_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace polir {

using TokenStream = std::vector<std::string>;

inline constexpr char kPhraseJoiner = '_';

struct PhraseConfig {
  int min_pair_count = 15;
  double score_threshold = 10.0;
  int passes = 2;
};

class PhraseTable {
 public:
  struct Merge {
    std::string merged;
    double score = 0.0;
    long pair_count = 0;
    int pass = 1;
  };
  using Pair = std::pair<std::string, std::string>;

  int pass_count() const { return pass_count_; }
  double score_threshold() const { return score_threshold_; }
  int min_pair_count() const { return min_pair_count_; }
  const std::map<Pair, Merge> &merges() const { return merges_; }
  size_t size() const { return merges_.size(); }

  const Merge *find(const std::string &a, const std::string &b) const;

  // Greedy left-to-right replacement, one scan per pass level.
  std::vector<std::string> apply(const std::vector<std::string> &tokens) const;
  std::vector<std::string> apply_pass(const std::vector<std::string> &tokens, int pass) const;

  // One merge per line: "token_a token_b score". A "# pass N" line marks the
  // pass level of the merges that follow; without markers the level is
  // inferred from whether a component is itself a phrase.
  std::string serialize() const;
  static PhraseTable parse(const std::string &text);
  void save(const std::string &path) const;
  static PhraseTable load(const std::string &path);

 private:
  friend PhraseTable learn_phrases(const std::vector<TokenStream> &, const PhraseConfig &);

  std::map<Pair, Merge> merges_;
  int pass_count_ = 0;
  double score_threshold_ = 0.0;
  int min_pair_count_ = 1;
};

PhraseTable learn_phrases(const std::vector<TokenStream> &corpus, const PhraseConfig &config);

// Split a phrase token back into its unigrams.
std::vector<std::string> split_phrase(const std::string &token);

}  // namespace polir

#endif  // POLIR_PHRASER_H_
