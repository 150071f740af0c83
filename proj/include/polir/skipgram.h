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

// Skip-gram word embeddings trained with negative sampling.
//
// For every (center, context) pair inside the window the trainer ascends
//
//   log sigma(u_ctx . v_cen) + sum_{i=1..k} log sigma(-u_neg_i . v_cen)
//
// where v are the input (word) vectors, u the output (context) vectors and
// the k negatives are drawn from the unigram distribution raised to 0.75.

#ifndef POLIR_SKIPGRAM_H_
#define POLIR_SKIPGRAM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polir/phraser.h"

namespace polir {

// Portable random source: the mt19937_64 engine is fully specified by the
// standard, and the derived draws below avoid the implementation-defined
// std distributions, so a seed means the same stream everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return static_cast<uint64_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Tokens with no counts, as read back from an embedding file.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string &token(size_t i) const { return tokens_[i]; }
  const std::vector<std::string> &tokens() const { return tokens_; }
  long count(size_t i) const { return counts_.empty() ? 0 : counts_[i]; }
  // Sum of counts of in-vocabulary tokens.
  long total_tokens() const { return total_tokens_; }
  int min_count() const { return min_count_; }
  // -1 when absent.
  int index_of(const std::string &token) const;
  bool contains(const std::string &token) const { return index_of(token) >= 0; }

  // Negative-sampling distribution, proportional to count^0.75.
  bool has_sampling_table() const { return !cumulative_.empty(); }
  double sampling_probability(size_t i) const;
  int sample(Rng &rng) const;

 private:
  friend Vocabulary build_vocab(const std::vector<TokenStream> &, int);

  void index();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  std::vector<long> counts_;
  std::vector<double> cumulative_;
  long total_tokens_ = 0;
  int min_count_ = 0;
};

// Tokens ordered by count (descending), then lexicographically.
Vocabulary build_vocab(const std::vector<TokenStream> &corpus, int min_count);

struct TrainConfig {
  int window = 12;
  int negatives = 15;
  int dim = 300;
  int min_count = 15;
  int epochs = 5;
  double learning_rate = 0.025;
  // Frequent-word subsampling threshold; 0 disables it.
  double subsample = 0.0;
  uint64_t seed = 1;
  int workers = 1;
  // Always use the full window instead of a uniform draw from 1..window.
  bool fixed_window = false;

  void validate() const;
};

struct EmbeddingMatrix {
  size_t rows = 0;
  size_t dim = 0;
  std::vector<float> input;   // rows x dim, the word vectors
  std::vector<float> output;  // rows x dim, context-side parameters; empty when loaded from file
  TrainConfig config;

  std::span<const float> vector(size_t i) const { return {input.data() + i * dim, dim}; }
  std::span<const float> context_vector(size_t i) const { return {output.data() + i * dim, dim}; }
  bool has_output() const { return !output.empty(); }
};

// Pairs of vocabulary indices. Tokens must already be mapped; the effective
// window for each position is drawn uniformly from 1..window unless fixed.
std::vector<std::pair<int, int>> generate_pairs(std::span<const int> tokens, int window, Rng &rng,
                                                bool fixed_window = false);

// Analytic gradient of one pair's objective.
struct PairGradient {
  double objective = 0.0;
  std::vector<double> d_center;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_negatives;
};

PairGradient pair_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>> &negatives);

// One SGD ascent step on a pair, in place. `scratch` must hold dim floats.
// Negatives are applied in order; each output vector update uses the center
// vector from before the step.
void ascend_pair(std::span<float> center, std::span<float> context,
                 const std::vector<std::span<float>> &negatives, float learning_rate,
                 std::span<float> scratch);

// Streams mapped to vocabulary indices, out-of-vocabulary tokens dropped.
std::vector<std::vector<int>> map_to_indices(const std::vector<TokenStream> &corpus, const Vocabulary &vocab);

struct TrainProgress {
  int epoch = 0;
  double learning_rate = 0.0;
  long words_processed = 0;
};

EmbeddingMatrix init_matrix(const Vocabulary &vocab, const TrainConfig &config);

EmbeddingMatrix train(const std::vector<TokenStream> &corpus, const Vocabulary &vocab, const TrainConfig &config,
                      const std::function<void(const TrainProgress &)> &on_epoch = {});

// A fixed (center, context, negatives) triple for measuring the objective.
struct HeldOutPair {
  int center = 0;
  int context = 0;
  std::vector<int> negatives;
};

std::vector<HeldOutPair> sample_held_out_pairs(const std::vector<TokenStream> &corpus, const Vocabulary &vocab,
                                               const TrainConfig &config, size_t count, uint64_t seed);

// Mean pair objective (log-likelihood, higher is better).
double mean_pair_objective(const EmbeddingMatrix &m, const std::vector<HeldOutPair> &pairs);

// Word vectors with their tokens, the unit consumed downstream.
struct Embeddings {
  Vocabulary vocab;
  EmbeddingMatrix matrix;

  size_t dim() const { return matrix.dim; }
  size_t size() const { return matrix.rows; }
  int index_of(const std::string &t) const { return vocab.index_of(t); }
  std::span<const float> vector(size_t i) const { return matrix.vector(i); }
};

enum class EmbeddingFormat { kText, kBinary };

// ".bin" selects the binary format, anything else text.
EmbeddingFormat format_for_path(const std::string &path);

// Text: header "V d", then "token x1 ... xd" per line.
// Binary: header "V d\n", then per row the token, a space, d little-endian
// float32 values and a newline.
std::string serialize_embeddings(const EmbeddingMatrix &m, const Vocabulary &vocab, EmbeddingFormat format);
Embeddings parse_embeddings(const std::string &data, EmbeddingFormat format);
void save_embeddings(const EmbeddingMatrix &m, const Vocabulary &vocab, const std::string &path);
void save_embeddings(const EmbeddingMatrix &m, const Vocabulary &vocab, const std::string &path,
                     EmbeddingFormat format);
Embeddings load_embeddings(const std::string &path);

// Vocabulary counts as "token count" lines, most frequent first.
void save_vocab_counts(const Vocabulary &vocab, const std::string &path);

}  // namespace polir

#endif  // POLIR_SKIPGRAM_H_
