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

#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "polir/io.h"
#include "test_util.h"

namespace polir {
namespace {

using testing::Gen;
using testing::ScratchDir;

double oracle_dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double oracle_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// The pair objective written out directly.
double oracle_objective(const std::vector<double> &v, const std::vector<double> &u,
                        const std::vector<std::vector<double>> &negs) {
  double f = std::log(oracle_sigmoid(oracle_dot(u, v)));
  for (const auto &n : negs) f += std::log(oracle_sigmoid(-oracle_dot(n, v)));
  return f;
}

std::vector<std::span<const double>> spans(const std::vector<std::vector<double>> &vs) {
  std::vector<std::span<const double>> out;
  for (const auto &v : vs) out.emplace_back(v);
  return out;
}

// Repeats a handful of sentences with disjoint topic vocabularies.
std::vector<TokenStream> topic_corpus(Gen &g, int sentences) {
  const std::vector<std::vector<std::string>> topics = {
      {"forest", "tree", "timber", "woodland", "canopy"},
      {"water", "river", "irrigation", "rainfall", "basin"},
      {"energy", "solar", "power", "grid", "electricity"}};
  std::vector<TokenStream> out;
  for (int s = 0; s < sentences; ++s) {
    const auto &topic = g.pick(topics);
    TokenStream ts;
    int len = g.integer(6, 14);
    for (int i = 0; i < len; ++i) ts.push_back(g.coin(0.8) ? g.pick(topic) : g.pick(std::vector<std::string>{"the", "and", "of"}));
    out.push_back(std::move(ts));
  }
  return out;
}

// ||a - b|| / max(||a||, ||b||), zero when both vanish.
double relative_error(const std::vector<double> &a, const std::vector<double> &b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double denom = std::sqrt(std::max(na, nb));
  return denom == 0.0 ? 0.0 : std::sqrt(diff) / denom;
}

TEST_CASE("analytic gradient matches central differences") {
  // Random 5-word model, d = 8, two negatives per pair.
  Gen g(42);
  const int words = 5, d = 8;
  const double h = 1e-6;
  double worst = 0.0;
  auto start = std::chrono::steady_clock::now();
  std::vector<std::vector<double>> in(words), out(words);
  for (int w = 0; w < words; ++w) {
    in[w] = g.vec(d);
    out[w] = g.vec(d);
  }
  for (int c = 0; c < words; ++c) {
    for (int x = 0; x < words; ++x) {
      if (x == c) continue;
      std::vector<int> neg_ids = {(x + 1) % words, (x + 3) % words};
      auto v = in[c], u = out[x];
      std::vector<std::vector<double>> negs = {out[neg_ids[0]], out[neg_ids[1]]};
      auto grad = pair_gradient(v, u, spans(negs));
      CHECK(grad.objective == doctest::Approx(oracle_objective(v, u, negs)).epsilon(1e-12));

      auto numeric = [&](std::vector<double> &x) {
        std::vector<double> gnum(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
          double keep = x[i];
          x[i] = keep + h;
          double up = oracle_objective(v, u, negs);
          x[i] = keep - h;
          double down = oracle_objective(v, u, negs);
          x[i] = keep;
          gnum[i] = (up - down) / (2 * h);
        }
        return gnum;
      };
      worst = std::max(worst, relative_error(numeric(v), grad.d_center));
      worst = std::max(worst, relative_error(numeric(u), grad.d_context));
      for (size_t k = 0; k < negs.size(); ++k) worst = std::max(worst, relative_error(numeric(negs[k]), grad.d_negatives[k]));
    }
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(worst < 1e-4);
  CHECK(seconds < 1.0);
}

TEST_CASE("one ascent step follows the analytic gradient") {
  Gen g(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 16;
    auto v = g.vec(d, -0.5, 0.5), u = g.vec(d, -0.5, 0.5);
    std::vector<std::vector<double>> negs;
    for (int k = 0; k < 3; ++k) negs.push_back(g.vec(d, -0.5, 0.5));
    auto grad = pair_gradient(v, u, spans(negs));

    std::vector<float> fv(v.begin(), v.end()), fu(u.begin(), u.end()), scratch(d);
    std::vector<std::vector<float>> fn;
    for (const auto &n : negs) fn.emplace_back(n.begin(), n.end());
    std::vector<std::span<float>> neg_spans;
    for (auto &n : fn) neg_spans.emplace_back(n);
    const float lr = 0.05f;
    ascend_pair(fv, fu, neg_spans, lr, scratch);
    for (int i = 0; i < d; ++i) {
      CHECK(fv[i] == doctest::Approx(v[i] + lr * grad.d_center[i]).epsilon(1e-5));
      CHECK(fu[i] == doctest::Approx(u[i] + lr * grad.d_context[i]).epsilon(1e-5));
      for (size_t k = 0; k < fn.size(); ++k) {
        CHECK(fn[k][i] == doctest::Approx(negs[k][i] + lr * grad.d_negatives[k][i]).epsilon(1e-5));
      }
    }
    // A small step raises the objective.
    std::vector<double> nv(fv.begin(), fv.end()), nu(fu.begin(), fu.end());
    std::vector<std::vector<double>> nn;
    for (const auto &n : fn) nn.emplace_back(n.begin(), n.end());
    CHECK(oracle_objective(nv, nu, nn) >= oracle_objective(v, u, negs) - 1e-9);
  }
}

TEST_CASE("vocabulary is ordered by count and respects min_count") {
  std::vector<TokenStream> corpus = {{"b", "a", "a", "c", "b", "a"}, {"d", "c", "b", "z"}};
  auto vocab = build_vocab(corpus, 2);
  CHECK(vocab.tokens() == std::vector<std::string>{"a", "b", "c"});
  CHECK(vocab.count(0) == 3);
  CHECK(vocab.count(1) == 3);
  CHECK(vocab.count(2) == 2);
  CHECK(vocab.total_tokens() == 8);
  CHECK(vocab.index_of("d") == -1);
  CHECK_ERROR_CODE(build_vocab({{}}, 1), ErrorCode::kValidation);
}

TEST_CASE("negative sampling follows count to the three-quarters") {
  std::vector<TokenStream> corpus(1);
  const std::vector<long> counts = {1000, 400, 150, 60, 20, 5};
  for (size_t i = 0; i < counts.size(); ++i) {
    for (long c = 0; c < counts[i]; ++c) corpus[0].push_back("w" + std::to_string(i));
  }
  auto vocab = build_vocab(corpus, 1);
  double norm = 0.0;
  for (long c : counts) norm += std::pow(static_cast<double>(c), 0.75);

  const int draws = 1000000;
  std::vector<long> seen(counts.size(), 0);
  Rng rng(99);
  for (int i = 0; i < draws; ++i) ++seen[static_cast<size_t>(vocab.sample(rng))];
  double chi2 = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    int idx = vocab.index_of("w" + std::to_string(i));
    double p = std::pow(static_cast<double>(counts[i]), 0.75) / norm;
    CHECK(vocab.sampling_probability(static_cast<size_t>(idx)) == doctest::Approx(p).epsilon(1e-12));
    double expected = p * draws;
    double observed = static_cast<double>(seen[static_cast<size_t>(idx)]);
    CHECK(std::abs(observed - expected) / expected < 0.02);
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  // 0.999 quantile of chi-square with 5 degrees of freedom.
  CHECK(chi2 < 20.515);
}

TEST_CASE("fixed window pairs match brute force enumeration") {
  Gen g(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> ids(static_cast<size_t>(g.integer(0, 20)));
    for (auto &x : ids) x = g.integer(0, 9);
    int w = g.integer(1, 5);
    Rng rng(1);
    auto pairs = generate_pairs(ids, w, rng, true);
    std::vector<std::pair<int, int>> expected;
    for (int t = 0; t < static_cast<int>(ids.size()); ++t) {
      for (int j = 0; j < static_cast<int>(ids.size()); ++j) {
        if (j != t && std::abs(j - t) <= w) expected.emplace_back(ids[t], ids[j]);
      }
    }
    CHECK(pairs == expected);
  }
}

TEST_CASE("sampled window never exceeds the configured width") {
  std::vector<int> ids(50);
  for (int i = 0; i < 50; ++i) ids[static_cast<size_t>(i)] = i;
  Rng rng(5);
  auto pairs = generate_pairs(ids, 4, rng);
  std::set<int> widths;
  for (auto [c, x] : pairs) {
    CHECK(std::abs(c - x) <= 4);
    CHECK(c != x);
    widths.insert(std::abs(c - x));
  }
  CHECK(widths.size() == 4);
}

TEST_CASE("initial weights lie in the scaled uniform range") {
  std::vector<TokenStream> corpus = {{"a", "b", "c", "a"}};
  auto vocab = build_vocab(corpus, 1);
  TrainConfig cfg;
  cfg.dim = 25;
  cfg.min_count = 1;
  auto m = init_matrix(vocab, cfg);
  REQUIRE(m.input.size() == 3 * 25);
  for (float x : m.input) {
    CHECK(x >= -0.5f / 25.0f);
    CHECK(x <= 0.5f / 25.0f);
  }
  for (float x : m.output) CHECK(x == 0.0f);
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 3;
  cfg.negatives = 4;
  cfg.min_count = 2;
  cfg.epochs = 3;
  cfg.seed = 17;
  return cfg;
}

TEST_CASE("single-worker training is reproducible from the seed") {
  Gen g(1);
  auto corpus = topic_corpus(g, 200);
  auto cfg = small_config();
  auto vocab = build_vocab(corpus, cfg.min_count);
  auto a = train(corpus, vocab, cfg);
  auto b = train(corpus, vocab, cfg);
  CHECK(a.input == b.input);
  CHECK(a.output == b.output);
  CHECK(io::checksum(serialize_embeddings(a, vocab, EmbeddingFormat::kBinary)) ==
        io::checksum(serialize_embeddings(b, vocab, EmbeddingFormat::kBinary)));
  cfg.seed = 18;
  auto c = train(corpus, vocab, cfg);
  CHECK(c.input != a.input);
}

TEST_CASE("zero epochs leave the initialization untouched") {
  Gen g(1);
  auto corpus = topic_corpus(g, 50);
  auto cfg = small_config();
  cfg.epochs = 0;
  auto vocab = build_vocab(corpus, cfg.min_count);
  auto m = train(corpus, vocab, cfg);
  auto init = init_matrix(vocab, cfg);
  CHECK(m.input == init.input);
  CHECK(m.output == init.output);
}

TEST_CASE("training raises the held-out pair objective") {
  Gen g(2);
  auto corpus = topic_corpus(g, 400);
  auto cfg = small_config();
  auto vocab = build_vocab(corpus, cfg.min_count);
  auto pairs = sample_held_out_pairs(corpus, vocab, cfg, 2000, 123);
  REQUIRE(pairs.size() == 2000);
  auto before = init_matrix(vocab, cfg);
  double f0 = mean_pair_objective(before, pairs);
  std::vector<double> per_epoch;
  auto m = train(corpus, vocab, cfg, [&](const TrainProgress &p) { per_epoch.push_back(p.learning_rate); });
  double f1 = mean_pair_objective(m, pairs);
  CHECK(f1 > f0);
  REQUIRE(per_epoch.size() == 3);
  CHECK(per_epoch[0] > per_epoch[1]);
  CHECK(per_epoch[1] > per_epoch[2]);
  CHECK(per_epoch[2] == doctest::Approx(cfg.learning_rate * 1e-4));
}

TEST_CASE("multi-worker training completes with finite weights") {
  Gen g(3);
  auto corpus = topic_corpus(g, 300);
  auto cfg = small_config();
  cfg.workers = 4;
  auto vocab = build_vocab(corpus, cfg.min_count);
  auto m = train(corpus, vocab, cfg);
  for (float x : m.input) REQUIRE(std::isfinite(x));
}

TEST_CASE("topic words end up closer to each other than to other topics") {
  Gen g(6);
  auto corpus = topic_corpus(g, 1500);
  auto cfg = small_config();
  cfg.epochs = 5;
  auto vocab = build_vocab(corpus, cfg.min_count);
  auto m = train(corpus, vocab, cfg);
  auto cos = [&](const std::string &a, const std::string &b) {
    auto x = m.vector(static_cast<size_t>(vocab.index_of(a)));
    auto y = m.vector(static_cast<size_t>(vocab.index_of(b)));
    double xy = 0, xx = 0, yy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      xy += x[i] * y[i];
      xx += x[i] * x[i];
      yy += y[i] * y[i];
    }
    return xy / std::sqrt(xx * yy);
  };
  CHECK(cos("forest", "timber") > cos("forest", "solar"));
  CHECK(cos("river", "irrigation") > cos("river", "grid"));
}

TEST_CASE("configuration mismatches are rejected") {
  std::vector<TokenStream> corpus = {{"a", "b", "a", "b"}};
  auto vocab = build_vocab(corpus, 2);
  TrainConfig cfg = small_config();
  cfg.min_count = 3;
  CHECK_ERROR_CODE(train(corpus, vocab, cfg), ErrorCode::kConfig);
  cfg.min_count = 2;
  cfg.window = 0;
  CHECK_ERROR_CODE(train(corpus, vocab, cfg), ErrorCode::kConfig);
  cfg.window = 2;
  CHECK_ERROR_CODE(train(corpus, Vocabulary::from_tokens({"a"}), cfg), ErrorCode::kConfig);
}

TEST_CASE("embedding files round-trip in both formats") {
  Gen g(12);
  auto corpus = topic_corpus(g, 100);
  auto cfg = small_config();
  cfg.epochs = 1;
  auto vocab = build_vocab(corpus, cfg.min_count);
  auto m = train(corpus, vocab, cfg);
  ScratchDir dir("emb");
  for (const char *name : {"vectors.txt", "vectors.bin"}) {
    save_embeddings(m, vocab, dir.file(name));
    auto back = load_embeddings(dir.file(name));
    CHECK(back.vocab.tokens() == vocab.tokens());
    CHECK(back.matrix.input == m.input);
    CHECK(back.dim() == m.dim);
    CHECK_FALSE(back.matrix.has_output());
  }
}

TEST_CASE("malformed embedding files name the offending line") {
  auto message = [](const std::string &data, EmbeddingFormat f) -> std::string {
    try {
      parse_embeddings(data, f);
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kParse);
      return e.what();
    }
    FAIL("expected parse error");
    return {};
  };
  CHECK(message("2 2\na 1 2\nb 1 2\nc 1 2\n", EmbeddingFormat::kText).find("line 4") != std::string::npos);
  CHECK(message("2 2\na 1 2\nb 1\n", EmbeddingFormat::kText).find("line 3") != std::string::npos);
  CHECK(message("1 2\na 1 x\n", EmbeddingFormat::kText).find("non-numeric") != std::string::npos);
  CHECK(message("2 1\na 1\na 2\n", EmbeddingFormat::kText).find("duplicate") != std::string::npos);
  CHECK(message("3 1\na 1\n", EmbeddingFormat::kText).find("declares 3") != std::string::npos);
  CHECK(message("nonsense\n", EmbeddingFormat::kText).find("line 1") != std::string::npos);

  std::string bin = "1 2\na ";
  float xs[2] = {1.0f, 2.0f};
  bin.append(reinterpret_cast<const char *>(xs), sizeof(xs));
  bin += "\n";
  CHECK(parse_embeddings(bin, EmbeddingFormat::kBinary).matrix.input == std::vector<float>{1.0f, 2.0f});
  CHECK(message(bin.substr(0, bin.size() - 3), EmbeddingFormat::kBinary).find("record 1") != std::string::npos);
  CHECK(message(bin + "b ", EmbeddingFormat::kBinary).find("more vectors") != std::string::npos);
}

}  // namespace
}  // namespace polir
