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

#include "polir/skipgram.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>
#include <thread>

#include "polir/error.h"
#include "polir/io.h"

namespace polir {

static_assert(std::endian::native == std::endian::little, "binary embedding format assumes little-endian floats");

namespace {

constexpr double kSamplingPower = 0.75;
constexpr double kMinLearningRateFraction = 1e-4;
constexpr long kLearningRateUpdateEvery = 1024;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
inline double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

template <typename A, typename B>
double dot(std::span<A> a, std::span<B> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary

void Vocabulary::index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], static_cast<int>(i));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.index();
  return v;
}

int Vocabulary::index_of(const std::string &token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

double Vocabulary::sampling_probability(size_t i) const {
  if (cumulative_.empty()) return 0.0;
  return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

int Vocabulary::sample(Rng &rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<int>(it - cumulative_.begin());
}

Vocabulary build_vocab(const std::vector<TokenStream> &corpus, int min_count) {
  std::unordered_map<std::string, long> counts;
  bool any = false;
  for (const auto &s : corpus) {
    for (const auto &t : s) {
      ++counts[t];
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::kValidation, "cannot build a vocabulary from an empty corpus");
  std::vector<std::pair<std::string, long>> kept;
  for (auto &[t, c] : counts) {
    if (c >= min_count) kept.emplace_back(t, c);
  }
  std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocabulary v;
  v.min_count_ = min_count;
  double norm = 0.0;
  for (auto &[t, c] : kept) {
    v.tokens_.push_back(t);
    v.counts_.push_back(c);
    v.total_tokens_ += c;
    norm += std::pow(static_cast<double>(c), kSamplingPower);
  }
  double acc = 0.0;
  for (long c : v.counts_) {
    acc += std::pow(static_cast<double>(c), kSamplingPower) / norm;
    v.cumulative_.push_back(acc);
  }
  if (!v.cumulative_.empty()) v.cumulative_.back() = 1.0;
  v.index();
  return v;
}

// ---------------------------------------------------------------------------
// Training

void TrainConfig::validate() const {
  if (window < 1) throw Error(ErrorCode::kConfig, "window must be >= 1");
  if (negatives < 1) throw Error(ErrorCode::kConfig, "negatives must be >= 1");
  if (dim < 1) throw Error(ErrorCode::kConfig, "dim must be >= 1");
  if (min_count < 1) throw Error(ErrorCode::kConfig, "min_count must be >= 1");
  if (epochs < 0) throw Error(ErrorCode::kConfig, "epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kConfig, "learning rate must be positive");
  if (subsample < 0.0) throw Error(ErrorCode::kConfig, "subsample threshold must be >= 0");
  if (workers < 1) throw Error(ErrorCode::kConfig, "workers must be >= 1");
}

std::vector<std::pair<int, int>> generate_pairs(std::span<const int> tokens, int window, Rng &rng,
                                                bool fixed_window) {
  std::vector<std::pair<int, int>> pairs;
  const long n = static_cast<long>(tokens.size());
  for (long t = 0; t < n; ++t) {
    long b = fixed_window ? window : 1 + static_cast<long>(rng.below(static_cast<uint64_t>(window)));
    for (long j = std::max(0L, t - b); j <= std::min(n - 1, t + b); ++j) {
      if (j != t) pairs.emplace_back(tokens[t], tokens[j]);
    }
  }
  return pairs;
}

PairGradient pair_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>> &negatives) {
  const size_t d = center.size();
  PairGradient g;
  g.d_center.assign(d, 0.0);
  double s = dot(context, center);
  g.objective = log_sigmoid(s);
  double coeff = 1.0 - sigmoid(s);
  g.d_context.resize(d);
  for (size_t i = 0; i < d; ++i) {
    g.d_center[i] += coeff * context[i];
    g.d_context[i] = coeff * center[i];
  }
  for (const auto &u : negatives) {
    double sn = dot(u, center);
    g.objective += log_sigmoid(-sn);
    double cn = -sigmoid(sn);
    std::vector<double> du(d);
    for (size_t i = 0; i < d; ++i) {
      g.d_center[i] += cn * u[i];
      du[i] = cn * center[i];
    }
    g.d_negatives.push_back(std::move(du));
  }
  return g;
}

void ascend_pair(std::span<float> center, std::span<float> context, const std::vector<std::span<float>> &negatives,
                 float learning_rate, std::span<float> scratch) {
  const size_t d = center.size();
  std::fill(scratch.begin(), scratch.end(), 0.0f);
  auto step = [&](std::span<float> u, double label) {
    double s = dot(u, std::span<const float>(center));
    float g = static_cast<float>((label - sigmoid(s)) * learning_rate);
    for (size_t i = 0; i < d; ++i) scratch[i] += g * u[i];
    for (size_t i = 0; i < d; ++i) u[i] += g * center[i];
  };
  step(context, 1.0);
  for (const auto &u : negatives) step(u, 0.0);
  for (size_t i = 0; i < d; ++i) center[i] += scratch[i];
}

std::vector<std::vector<int>> map_to_indices(const std::vector<TokenStream> &corpus, const Vocabulary &vocab) {
  std::vector<std::vector<int>> out;
  out.reserve(corpus.size());
  for (const auto &s : corpus) {
    std::vector<int> ids;
    ids.reserve(s.size());
    for (const auto &t : s) {
      int id = vocab.index_of(t);
      if (id >= 0) ids.push_back(id);
    }
    out.push_back(std::move(ids));
  }
  return out;
}

EmbeddingMatrix init_matrix(const Vocabulary &vocab, const TrainConfig &config) {
  EmbeddingMatrix m;
  m.rows = vocab.size();
  m.dim = static_cast<size_t>(config.dim);
  m.config = config;
  m.input.resize(m.rows * m.dim);
  m.output.assign(m.rows * m.dim, 0.0f);
  Rng rng(config.seed);
  const double scale = 1.0 / static_cast<double>(m.dim);
  for (auto &x : m.input) x = static_cast<float>((rng.uniform() - 0.5) * scale);
  return m;
}

namespace {

struct Shared {
  EmbeddingMatrix *m;
  const Vocabulary *vocab;
  const TrainConfig *config;
  long total_words;
  std::atomic<long> processed{0};
};

// Trains over the given streams for one epoch. Updates to the shared
// matrices are unsynchronized when several workers run.
void run_epoch(Shared &sh, const std::vector<std::vector<int>> &streams, const std::vector<size_t> &shard,
               Rng &rng, int epoch) {
  const auto &cfg = *sh.config;
  const size_t d = sh.m->dim;
  float *in = sh.m->input.data();
  float *out = sh.m->output.data();
  std::vector<float> scratch(d);
  std::vector<std::span<float>> negs;
  negs.reserve(static_cast<size_t>(cfg.negatives));
  std::vector<int> kept;
  const double budget = static_cast<double>(sh.total_words) * cfg.epochs;
  const double sample_t = cfg.subsample * static_cast<double>(sh.vocab->total_tokens());
  long local = 0;
  float lr = static_cast<float>(cfg.learning_rate);
  auto refresh_lr = [&]() {
    double progress = static_cast<double>(sh.processed.load(std::memory_order_relaxed)) / std::max(1.0, budget);
    double frac = std::max(kMinLearningRateFraction, 1.0 - progress);
    lr = static_cast<float>(cfg.learning_rate * frac);
  };
  (void)epoch;
  refresh_lr();
  for (size_t s : shard) {
    const auto &ids = streams[s];
    kept.clear();
    for (int id : ids) {
      if (cfg.subsample > 0.0) {
        double f = static_cast<double>(sh.vocab->count(static_cast<size_t>(id)));
        double keep = (std::sqrt(f / sample_t) + 1.0) * sample_t / f;
        if (keep < rng.uniform()) continue;
      }
      kept.push_back(id);
    }
    const long n = static_cast<long>(kept.size());
    for (long t = 0; t < n; ++t) {
      long b = cfg.fixed_window ? cfg.window : 1 + static_cast<long>(rng.below(static_cast<uint64_t>(cfg.window)));
      std::span<float> center(in + static_cast<size_t>(kept[t]) * d, d);
      for (long j = std::max(0L, t - b); j <= std::min(n - 1, t + b); ++j) {
        if (j == t) continue;
        const int ctx = kept[j];
        negs.clear();
        for (int k = 0; k < cfg.negatives; ++k) {
          int neg = sh.vocab->sample(rng);
          if (neg == ctx) continue;
          negs.emplace_back(out + static_cast<size_t>(neg) * d, d);
        }
        ascend_pair(center, std::span<float>(out + static_cast<size_t>(ctx) * d, d), negs, lr,
                    std::span<float>(scratch));
      }
      if (++local % kLearningRateUpdateEvery == 0) {
        sh.processed.fetch_add(kLearningRateUpdateEvery, std::memory_order_relaxed);
        refresh_lr();
      }
    }
    // Dropped (subsampled) tokens still count towards progress.
    long dropped = static_cast<long>(ids.size()) - n;
    if (dropped > 0) sh.processed.fetch_add(dropped, std::memory_order_relaxed);
  }
  sh.processed.fetch_add(local % kLearningRateUpdateEvery, std::memory_order_relaxed);
}

}  // namespace

EmbeddingMatrix train(const std::vector<TokenStream> &corpus, const Vocabulary &vocab, const TrainConfig &config,
                      const std::function<void(const TrainProgress &)> &on_epoch) {
  config.validate();
  if (vocab.empty()) throw Error(ErrorCode::kConfig, "vocabulary is empty");
  if (!vocab.has_sampling_table()) throw Error(ErrorCode::kConfig, "vocabulary has no counts; build it from the corpus");
  if (vocab.min_count() != config.min_count) {
    throw Error(ErrorCode::kConfig, "vocabulary built with min_count " + std::to_string(vocab.min_count()) +
                                        " but config has " + std::to_string(config.min_count));
  }
  auto streams = map_to_indices(corpus, vocab);
  EmbeddingMatrix m = init_matrix(vocab, config);

  Shared sh;
  sh.m = &m;
  sh.vocab = &vocab;
  sh.config = &config;
  sh.total_words = 0;
  for (const auto &s : streams) sh.total_words += static_cast<long>(s.size());

  const int workers = config.workers;
  std::vector<std::vector<size_t>> shards(static_cast<size_t>(workers));
  for (size_t i = 0; i < streams.size(); ++i) shards[i % static_cast<size_t>(workers)].push_back(i);

  // The rng that drew the initial weights continues into training so a
  // single-worker run depends on the seed alone.
  std::vector<Rng> rngs;
  rngs.emplace_back(config.seed);
  for (size_t i = 0; i < m.input.size(); ++i) rngs[0].next();
  for (int w = 1; w < workers; ++w) rngs.emplace_back(config.seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(w));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (workers == 1) {
      run_epoch(sh, streams, shards[0], rngs[0], epoch);
    } else {
      std::vector<std::thread> threads;
      for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() { run_epoch(sh, streams, shards[static_cast<size_t>(w)], rngs[static_cast<size_t>(w)], epoch); });
      }
      for (auto &t : threads) t.join();
    }
    if (on_epoch) {
      long done = sh.processed.load();
      double frac = std::max(kMinLearningRateFraction,
                             1.0 - static_cast<double>(done) / std::max(1.0, static_cast<double>(sh.total_words) * config.epochs));
      on_epoch({epoch + 1, config.learning_rate * frac, done});
    }
  }
  return m;
}

std::vector<HeldOutPair> sample_held_out_pairs(const std::vector<TokenStream> &corpus, const Vocabulary &vocab,
                                               const TrainConfig &config, size_t count, uint64_t seed) {
  auto streams = map_to_indices(corpus, vocab);
  std::vector<size_t> usable;
  for (size_t i = 0; i < streams.size(); ++i) {
    if (streams[i].size() >= 2) usable.push_back(i);
  }
  std::vector<HeldOutPair> out;
  if (usable.empty()) return out;
  Rng rng(seed);
  while (out.size() < count) {
    const auto &s = streams[usable[rng.below(usable.size())]];
    long n = static_cast<long>(s.size());
    long t = static_cast<long>(rng.below(static_cast<uint64_t>(n)));
    long lo = std::max(0L, t - config.window), hi = std::min(n - 1, t + config.window);
    long j = lo + static_cast<long>(rng.below(static_cast<uint64_t>(hi - lo + 1)));
    if (j == t) continue;
    HeldOutPair p{s[t], s[j], {}};
    while (static_cast<int>(p.negatives.size()) < config.negatives) {
      int neg = vocab.sample(rng);
      if (neg != p.context) p.negatives.push_back(neg);
    }
    out.push_back(std::move(p));
  }
  return out;
}

double mean_pair_objective(const EmbeddingMatrix &m, const std::vector<HeldOutPair> &pairs) {
  if (pairs.empty() || !m.has_output()) return 0.0;
  double total = 0.0;
  for (const auto &p : pairs) {
    auto v = m.vector(static_cast<size_t>(p.center));
    total += log_sigmoid(dot(m.context_vector(static_cast<size_t>(p.context)), v));
    for (int n : p.negatives) total += log_sigmoid(-dot(m.context_vector(static_cast<size_t>(n)), v));
  }
  return total / static_cast<double>(pairs.size());
}

// ---------------------------------------------------------------------------
// Files

EmbeddingFormat format_for_path(const std::string &path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0 ? EmbeddingFormat::kBinary
                                                                          : EmbeddingFormat::kText;
}

std::string serialize_embeddings(const EmbeddingMatrix &m, const Vocabulary &vocab, EmbeddingFormat format) {
  if (vocab.size() != m.rows) throw Error(ErrorCode::kConfig, "vocabulary and matrix sizes differ");
  std::string out = std::to_string(m.rows) + " " + std::to_string(m.dim) + "\n";
  char buf[32];
  for (size_t r = 0; r < m.rows; ++r) {
    out += vocab.token(r);
    auto row = m.vector(r);
    if (format == EmbeddingFormat::kText) {
      for (float x : row) {
        auto res = std::to_chars(buf, buf + sizeof(buf), x);
        out.push_back(' ');
        out.append(buf, res.ptr);
      }
    } else {
      out.push_back(' ');
      out.append(reinterpret_cast<const char *>(row.data()), row.size() * sizeof(float));
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

[[noreturn]] void parse_fail(const std::string &where, const std::string &what) {
  throw Error(ErrorCode::kParse, "embedding file " + where + ": " + what);
}

}  // namespace

Embeddings parse_embeddings(const std::string &data, EmbeddingFormat format) {
  size_t eol = data.find('\n');
  if (eol == std::string::npos) parse_fail("line 1", "missing header \"V d\"");
  long rows = -1, dim = -1;
  {
    std::istringstream header(data.substr(0, eol));
    std::string extra;
    if (!(header >> rows >> dim) || (header >> extra) || rows < 0 || dim < 1) {
      parse_fail("line 1", "malformed header \"" + data.substr(0, eol) + "\"");
    }
  }
  Embeddings e;
  e.matrix.rows = static_cast<size_t>(rows);
  e.matrix.dim = static_cast<size_t>(dim);
  e.matrix.input.reserve(static_cast<size_t>(rows * dim));
  std::vector<std::string> tokens;
  std::unordered_map<std::string, long> seen;
  size_t pos = eol + 1;

  if (format == EmbeddingFormat::kText) {
    long lineno = 1;
    while (pos < data.size()) {
      size_t end = data.find('\n', pos);
      if (end == std::string::npos) end = data.size();
      std::string_view line(data.data() + pos, end - pos);
      pos = end + 1;
      ++lineno;
      if (io::trim(line).empty()) continue;
      std::string where = "line " + std::to_string(lineno);
      if (static_cast<long>(tokens.size()) >= rows) {
        parse_fail(where, "more vectors than the header count " + std::to_string(rows));
      }
      std::vector<std::string_view> fields;
      size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t b = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > b) fields.push_back(line.substr(b, i - b));
      }
      if (static_cast<long>(fields.size()) != dim + 1) {
        parse_fail(where, "expected " + std::to_string(dim) + " values, found " + std::to_string(fields.size() - 1));
      }
      std::string token(fields[0]);
      if (!seen.emplace(token, lineno).second) parse_fail(where, "duplicate token '" + token + "'");
      tokens.push_back(token);
      for (size_t f = 1; f < fields.size(); ++f) {
        float x = 0.0f;
        auto res = std::from_chars(fields[f].data(), fields[f].data() + fields[f].size(), x);
        if (res.ec != std::errc() || res.ptr != fields[f].data() + fields[f].size() || !std::isfinite(x)) {
          parse_fail(where, "non-numeric value '" + std::string(fields[f]) + "'");
        }
        e.matrix.input.push_back(x);
      }
    }
    if (static_cast<long>(tokens.size()) != rows) {
      parse_fail("line " + std::to_string(lineno), "header declares " + std::to_string(rows) + " vectors, found " +
                                                        std::to_string(tokens.size()));
    }
  } else {
    const size_t bytes = static_cast<size_t>(dim) * sizeof(float);
    for (long r = 0; r < rows; ++r) {
      std::string where = "record " + std::to_string(r + 1);
      while (pos < data.size() && data[pos] == '\n') ++pos;
      size_t sp = data.find(' ', pos);
      if (sp == std::string::npos || sp == pos) parse_fail(where, "missing token");
      std::string token = data.substr(pos, sp - pos);
      pos = sp + 1;
      if (pos + bytes > data.size()) parse_fail(where, "truncated vector");
      if (!seen.emplace(token, r).second) parse_fail(where, "duplicate token '" + token + "'");
      tokens.push_back(token);
      size_t off = e.matrix.input.size();
      e.matrix.input.resize(off + static_cast<size_t>(dim));
      std::memcpy(e.matrix.input.data() + off, data.data() + pos, bytes);
      for (size_t i = off; i < e.matrix.input.size(); ++i) {
        if (!std::isfinite(e.matrix.input[i])) parse_fail(where, "non-finite value");
      }
      pos += bytes;
    }
    while (pos < data.size() && data[pos] == '\n') ++pos;
    if (pos != data.size()) parse_fail("record " + std::to_string(rows + 1), "more vectors than the header count");
  }
  e.matrix.config.dim = static_cast<int>(dim);
  e.vocab = Vocabulary::from_tokens(std::move(tokens));
  return e;
}

void save_embeddings(const EmbeddingMatrix &m, const Vocabulary &vocab, const std::string &path,
                     EmbeddingFormat format) {
  io::write_file(path, serialize_embeddings(m, vocab, format));
}

void save_embeddings(const EmbeddingMatrix &m, const Vocabulary &vocab, const std::string &path) {
  save_embeddings(m, vocab, path, format_for_path(path));
}

Embeddings load_embeddings(const std::string &path) {
  return parse_embeddings(io::read_file(path), format_for_path(path));
}

void save_vocab_counts(const Vocabulary &vocab, const std::string &path) {
  std::string out;
  for (size_t i = 0; i < vocab.size(); ++i) out += vocab.token(i) + " " + std::to_string(vocab.count(i)) + "\n";
  io::write_file(path, out);
}

}  // namespace polir
