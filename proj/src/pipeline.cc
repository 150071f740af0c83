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

#include "polir/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "polir/error.h"
#include "polir/evaluation.h"
#include "polir/io.h"
#include "polir/report.h"
#include "polir/vectorizer.h"

namespace polir {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

void require_file(const std::string &path, const std::string &what) {
  if (path.empty()) throw Error(ErrorCode::kMissingInput, "missing input: no " + what + " path configured");
  if (!io::exists(path)) throw Error(ErrorCode::kMissingInput, "missing input: " + path + " (" + what + ")");
}

void check_keys(const Json &j, const std::string &where, const std::set<std::string> &allowed) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, where + " must be a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (!allowed.count(key)) throw Error(ErrorCode::kConfig, "unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void read_field(const Json &j, const std::string &where, const std::string &key, T *out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const Json::exception &) {
    throw Error(ErrorCode::kConfig, "config key '" + where + "." + key + "' has the wrong type");
  }
}

std::string resolve(const std::string &base, const std::string &path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

CleaningRules load_rules(const PipelineConfig &c) {
  if (c.paths.cleaning_rules.empty()) return CleaningRules::defaults();
  require_file(c.paths.cleaning_rules, "cleaning rules");
  try {
    return CleaningRules::from_json(Json::parse(io::read_file(c.paths.cleaning_rules)));
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kConfig, c.paths.cleaning_rules + ": " + e.what());
  }
}

Lexicon load_lexicon(const PipelineConfig &c) {
  Lexicon lexicon;
  if (!c.paths.lexicon.empty()) {
    require_file(c.paths.lexicon, "spelling lexicon");
    for (const auto &line : io::split(io::read_file(c.paths.lexicon), '\n')) {
      std::string w = io::lower(io::trim(line));
      if (!w.empty()) lexicon.insert(w);
    }
  } else {
    std::map<std::string, long> counts;
    for (const auto &stream : background_streams(c)) {
      for (const auto &t : stream) ++counts[t];
    }
    for (const auto &[w, n] : counts) {
      if (n >= c.lexicon_min_count) lexicon.insert(w);
    }
  }
  if (lexicon.empty()) throw Error(ErrorCode::kValidation, "spelling lexicon is empty");
  return lexicon;
}

Corpus load_segmented(const PipelineConfig &c) {
  require_file(io::join_path(c.segmented_dir(), "documents.jsonl"), "segmented corpus; run ingest");
  require_file(io::join_path(c.segmented_dir(), "corpus.jsonl"), "segmented corpus; run ingest");
  return read_segmented(c.segmented_dir());
}

std::string corpus_id(const PipelineConfig &c) {
  return io::checksum(io::read_file(io::join_path(c.segmented_dir(), "corpus.jsonl")));
}

PhraseTable load_phrases_if_any(const PipelineConfig &c) {
  return io::exists(c.phrases_path()) ? PhraseTable::load(c.phrases_path()) : PhraseTable();
}

// Everything the query-side stages need.
struct Loaded {
  Corpus corpus;
  Embeddings embeddings;
  TfidfStats stats;
  std::vector<ParagraphVector> vectors;
};

Loaded load_downstream(const PipelineConfig &c) {
  require_file(c.embeddings_path(), "embedding file");
  require_file(c.tfidf_path(), "tf-idf statistics; run vectorize");
  require_file(io::join_path(c.vectors_dir(), "paragraphs.bin"), "paragraph vectors; run vectorize");
  Loaded l;
  l.corpus = load_segmented(c);
  l.embeddings = load_embeddings(c.embeddings_path());
  try {
    l.stats = TfidfStats::from_json(Json::parse(io::read_file(c.tfidf_path())));
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kParse, c.tfidf_path() + ": " + e.what());
  }
  l.vectors = read_paragraph_vectors(c.vectors_dir());
  if (!l.vectors.empty() && l.vectors.front().vector.size() != l.embeddings.dim()) {
    throw Error(ErrorCode::kConfig, "paragraph vectors and embeddings differ in dimension; rerun vectorize");
  }
  return l;
}

void check_query_terms(const AgendaQuery &q, const Embeddings &emb) {
  q.validate();
  for (const auto &t : q.terms) {
    if (emb.index_of(t) >= 0) continue;
    std::string hint;
    for (const auto &s : suggest_terms(t, emb)) hint += (hint.empty() ? "" : ", ") + s;
    throw Error(ErrorCode::kValidation, "query '" + q.label + "' term '" + t + "' is not in the embedding vocabulary" +
                                            (hint.empty() ? "" : " (closest: " + hint + ")"));
  }
}

std::vector<std::string> doc_ids(const Corpus &corpus) {
  std::vector<std::string> ids;
  for (const auto &d : corpus.documents()) ids.push_back(d.meta.doc_id);
  return ids;
}

}  // namespace

// PipelineConfig

PipelineConfig PipelineConfig::from_json(const Json &j, const std::string &base_dir) {
  check_keys(j, "config", {"paths", "train", "phrases", "segment", "spell", "lexicon_min_count", "seed", "threshold"});
  PipelineConfig c;
  if (j.contains("paths")) {
    const Json &p = j["paths"];
    check_keys(p, "paths",
               {"background_dir", "manifest", "embeddings", "queries", "gold", "out", "cleaning_rules", "lexicon"});
    read_field(p, "paths", "background_dir", &c.paths.background_dir);
    read_field(p, "paths", "manifest", &c.paths.manifest);
    read_field(p, "paths", "embeddings", &c.paths.embeddings);
    read_field(p, "paths", "queries", &c.paths.queries);
    read_field(p, "paths", "gold", &c.paths.gold);
    read_field(p, "paths", "out", &c.paths.out);
    read_field(p, "paths", "cleaning_rules", &c.paths.cleaning_rules);
    read_field(p, "paths", "lexicon", &c.paths.lexicon);
  }
  for (std::string *path : {&c.paths.background_dir, &c.paths.manifest, &c.paths.embeddings, &c.paths.queries,
                            &c.paths.gold, &c.paths.out, &c.paths.cleaning_rules, &c.paths.lexicon}) {
    *path = resolve(base_dir, *path);
  }
  if (j.contains("train")) {
    const Json &t = j["train"];
    check_keys(t, "train",
               {"window", "negatives", "dim", "min_count", "epochs", "learning_rate", "subsample", "workers",
                "fixed_window"});
    read_field(t, "train", "window", &c.train.window);
    read_field(t, "train", "negatives", &c.train.negatives);
    read_field(t, "train", "dim", &c.train.dim);
    read_field(t, "train", "min_count", &c.train.min_count);
    read_field(t, "train", "epochs", &c.train.epochs);
    read_field(t, "train", "learning_rate", &c.train.learning_rate);
    read_field(t, "train", "subsample", &c.train.subsample);
    read_field(t, "train", "workers", &c.train.workers);
    read_field(t, "train", "fixed_window", &c.train.fixed_window);
  }
  if (j.contains("phrases")) {
    const Json &p = j["phrases"];
    check_keys(p, "phrases", {"min_pair_count", "score_threshold", "passes"});
    read_field(p, "phrases", "min_pair_count", &c.phrases.min_pair_count);
    read_field(p, "phrases", "score_threshold", &c.phrases.score_threshold);
    read_field(p, "phrases", "passes", &c.phrases.passes);
  }
  if (j.contains("segment")) {
    const Json &s = j["segment"];
    check_keys(s, "segment", {"min_paragraph_tokens", "abbreviations"});
    read_field(s, "segment", "min_paragraph_tokens", &c.segment.min_paragraph_tokens);
    read_field(s, "segment", "abbreviations", &c.segment.abbreviations);
  }
  if (j.contains("spell")) {
    const Json &s = j["spell"];
    check_keys(s, "spell", {"max_distance", "min_token_length", "require_in_document"});
    read_field(s, "spell", "max_distance", &c.spell.max_distance);
    read_field(s, "spell", "min_token_length", &c.spell.min_token_length);
    read_field(s, "spell", "require_in_document", &c.spell.require_in_document);
  }
  read_field(j, "config", "lexicon_min_count", &c.lexicon_min_count);
  read_field(j, "config", "seed", &c.seed);
  if (j.contains("threshold")) {
    double t = 0.0;
    read_field(j, "config", "threshold", &t);
    c.threshold = t;
  }
  c.train.seed = c.seed;
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string &path) {
  require_file(path, "config file");
  Json j;
  try {
    j = Json::parse(io::read_file(path));
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::kConfig, path + ": " + e.what());
  }
  return from_json(j, io::parent_dir(path));
}

nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j = {
      {"paths",
       {{"background_dir", paths.background_dir},
        {"manifest", paths.manifest},
        {"embeddings", paths.embeddings},
        {"queries", paths.queries},
        {"gold", paths.gold},
        {"out", paths.out},
        {"cleaning_rules", paths.cleaning_rules},
        {"lexicon", paths.lexicon}}},
      {"train",
       {{"window", train.window},
        {"negatives", train.negatives},
        {"dim", train.dim},
        {"min_count", train.min_count},
        {"epochs", train.epochs},
        {"learning_rate", train.learning_rate},
        {"subsample", train.subsample},
        {"workers", train.workers},
        {"fixed_window", train.fixed_window}}},
      {"phrases",
       {{"min_pair_count", phrases.min_pair_count},
        {"score_threshold", phrases.score_threshold},
        {"passes", phrases.passes}}},
      {"segment", {{"min_paragraph_tokens", segment.min_paragraph_tokens}, {"abbreviations", segment.abbreviations}}},
      {"spell",
       {{"max_distance", spell.max_distance},
        {"min_token_length", spell.min_token_length},
        {"require_in_document", spell.require_in_document}}},
      {"lexicon_min_count", lexicon_min_count},
      {"seed", seed},
  };
  if (threshold) j["threshold"] = *threshold;
  return j;
}

void PipelineConfig::validate() const {
  train.validate();
  if (phrases.passes < 1 || phrases.passes > 2) throw Error(ErrorCode::kConfig, "phrases.passes must be 1 or 2");
  if (phrases.min_pair_count < 1) throw Error(ErrorCode::kConfig, "phrases.min_pair_count must be >= 1");
  if (segment.min_paragraph_tokens < 1) throw Error(ErrorCode::kConfig, "segment.min_paragraph_tokens must be >= 1");
  if (spell.max_distance < 0) throw Error(ErrorCode::kConfig, "spell.max_distance must be >= 0");
  if (lexicon_min_count < 1) throw Error(ErrorCode::kConfig, "lexicon_min_count must be >= 1");
  if (threshold && !(*threshold > 0.0 && *threshold <= 1.0)) {
    throw Error(ErrorCode::kValidation, "threshold must lie in (0, 1]");
  }
  if (paths.out.empty()) throw Error(ErrorCode::kConfig, "paths.out must not be empty");
}

std::string PipelineConfig::segmented_dir() const { return io::join_path(paths.out, "segmented"); }
std::string PipelineConfig::model_dir() const { return io::join_path(paths.out, "model"); }
std::string PipelineConfig::phrases_path() const { return io::join_path(model_dir(), "phrases.txt"); }
std::string PipelineConfig::embeddings_path() const {
  return paths.embeddings.empty() ? io::join_path(model_dir(), "embeddings.bin") : paths.embeddings;
}
std::string PipelineConfig::vectors_dir() const { return io::join_path(paths.out, "vectors"); }
std::string PipelineConfig::tfidf_path() const { return io::join_path(vectors_dir(), "tfidf.json"); }
std::string PipelineConfig::labels_path() const { return io::join_path(paths.out, "labels.csv"); }
std::string PipelineConfig::hits_dir() const { return io::join_path(paths.out, "hits"); }
std::string PipelineConfig::queries_dir() const { return io::join_path(paths.out, "queries"); }
std::string PipelineConfig::reports_dir() const { return io::join_path(paths.out, "reports"); }
std::string PipelineConfig::metrics_csv_path() const { return io::join_path(paths.out, "metrics.csv"); }
std::string PipelineConfig::metrics_text_path() const { return io::join_path(paths.out, "metrics.txt"); }

// Stages

std::vector<TokenStream> background_streams(const PipelineConfig &c) {
  const std::string &dir = c.paths.background_dir;
  if (dir.empty()) throw Error(ErrorCode::kMissingInput, "missing input: no background corpus directory configured");
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kMissingInput, "missing input: " + dir + " (background corpus directory)");
  std::vector<std::string> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kMissingInput, "missing input: no .txt files in " + dir);
  const CleaningRules rules = load_rules(c);
  std::vector<TokenStream> streams;
  for (const auto &f : files) {
    std::string text = io::read_file(f);
    if (io::trim(text).empty()) continue;
    Document doc = segment(clean(ingest(text, {fs::path(f).stem().string(), "", "background", ""}), rules), c.segment);
    for (auto &p : doc.paragraphs) streams.push_back(std::move(p.tokens));
  }
  return streams;
}

std::vector<AgendaQuery> resolve_queries(const PipelineConfig &c) {
  std::vector<AgendaQuery> qs = c.inline_queries;
  if (qs.empty()) {
    require_file(c.paths.queries, "query file");
    qs = read_queries(c.paths.queries);
  }
  std::set<std::string> labels;
  for (auto &q : qs) {
    if (c.threshold) q.threshold = *c.threshold;
    q.validate();
    if (!labels.insert(q.label).second) throw Error(ErrorCode::kValidation, "duplicate query label '" + q.label + "'");
  }
  return qs;
}

StageResult run_ingest(const PipelineConfig &c) {
  require_file(c.paths.manifest, "study corpus manifest");
  auto entries = read_manifest(c.paths.manifest);
  for (const auto &e : entries) require_file(e.path, "document " + e.meta.doc_id);
  const CleaningRules rules = load_rules(c);
  const Lexicon lexicon = load_lexicon(c);
  Corpus corpus;
  size_t corrections = 0, dropped = 0;
  for (const auto &e : entries) {
    Document doc = ingest(io::read_file(e.path), e.meta);
    doc = segment(correct_spelling(clean(doc, rules), lexicon, c.spell), c.segment);
    for (const auto &k : doc.corrections) corrections += k.occurrences;
    dropped += doc.dropped_fragments.size();
    corpus.add(std::move(doc));
  }
  write_segmented(corpus, c.segmented_dir());
  StageResult r{"ingest", {}, {}};
  r.artifacts = {io::join_path(c.segmented_dir(), "documents.jsonl"), io::join_path(c.segmented_dir(), "corpus.jsonl")};
  r.summary = {{"documents", corpus.size()},
               {"paragraphs", corpus.paragraph_count()},
               {"spelling_corrections", corrections},
               {"dropped_fragments", dropped},
               {"lexicon_size", lexicon.size()},
               {"corpus_id", corpus_id(c)}};
  return r;
}

StageResult run_train(const PipelineConfig &c) {
  auto streams = background_streams(c);
  PhraseTable phrases = learn_phrases(streams, c.phrases);
  for (auto &s : streams) s = phrases.apply(s);
  Vocabulary vocab = build_vocab(streams, c.train.min_count);
  if (vocab.empty()) throw Error(ErrorCode::kValidation, "no background token reaches min_count " + std::to_string(c.train.min_count));
  auto held_out = sample_held_out_pairs(streams, vocab, c.train, 2000, c.seed ^ 0x9e3779b97f4a7c15ULL);
  double before = mean_pair_objective(init_matrix(vocab, c.train), held_out);
  EmbeddingMatrix m = train(streams, vocab, c.train);
  double after = mean_pair_objective(m, held_out);

  io::ensure_dir(c.model_dir());
  io::ensure_dir(io::parent_dir(c.embeddings_path()));
  phrases.save(c.phrases_path());
  save_vocab_counts(vocab, io::join_path(c.model_dir(), "vocab.txt"));
  save_embeddings(m, vocab, c.embeddings_path());
  std::string checksum = io::checksum(io::read_file(c.embeddings_path()));
  nlohmann::ordered_json snapshot = {{"config", c.to_json()["train"]},
                                     {"seed", c.seed},
                                     {"vocab_size", vocab.size()},
                                     {"background_tokens", vocab.total_tokens()},
                                     {"phrases", phrases.size()},
                                     {"held_out_objective_initial", before},
                                     {"held_out_objective_final", after},
                                     {"embeddings_checksum", checksum}};
  io::write_file(io::join_path(c.model_dir(), "train.json"), snapshot.dump(2) + "\n");
  StageResult r{"train", {}, snapshot};
  r.artifacts = {c.phrases_path(), io::join_path(c.model_dir(), "vocab.txt"), c.embeddings_path(),
                 io::join_path(c.model_dir(), "train.json")};
  return r;
}

StageResult run_vectorize(const PipelineConfig &c) {
  require_file(c.embeddings_path(), "embedding file");
  Corpus corpus = load_segmented(c);
  Embeddings emb = load_embeddings(c.embeddings_path());
  PhraseTable phrases = load_phrases_if_any(c);
  for (auto &doc : corpus.documents()) {
    for (auto &p : doc.paragraphs) p.tokens = phrases.apply(p.tokens);
  }
  TfidfStats stats = fit_tfidf(corpus);
  auto vectors = embed_corpus(corpus, stats, emb);
  write_paragraph_vectors(c.vectors_dir(), vectors, emb.dim());
  io::write_file(c.tfidf_path(), stats.to_json().dump() + "\n");
  size_t retrievable = 0;
  double coverage = 0.0;
  for (const auto &v : vectors) {
    retrievable += v.retrievable;
    coverage += v.coverage;
  }
  StageResult r{"vectorize", {}, {}};
  r.artifacts = {c.tfidf_path(), io::join_path(c.vectors_dir(), "paragraphs.bin"),
                 io::join_path(c.vectors_dir(), "paragraphs.idx.tsv")};
  r.summary = {{"paragraphs", vectors.size()},
               {"retrievable", retrievable},
               {"mean_coverage", vectors.empty() ? 0.0 : coverage / static_cast<double>(vectors.size())},
               {"phrases_applied", phrases.size()}};
  return r;
}

StageResult run_query(const PipelineConfig &c) {
  auto queries = resolve_queries(c);
  Loaded l = load_downstream(c);
  io::ensure_dir(c.queries_dir());
  StageResult r{"query", {}, {{"queries", Json::array()}}};
  for (const auto &q : queries) {
    check_query_terms(q, l.embeddings);
    auto qv = embed_query(q.terms, l.stats, l.embeddings);
    std::set<std::string> exclude(q.terms.begin(), q.terms.end());
    auto neighbors = nearest_words(qv, l.embeddings, kDefaultNeighbors, exclude);
    std::string csv = io::csv_line({"rank", "token", "similarity"});
    for (size_t i = 0; i < neighbors.size(); ++i) {
      csv += io::csv_line({std::to_string(i + 1), neighbors[i].token, io::format_fixed(neighbors[i].similarity, 6)});
    }
    std::string base = io::join_path(c.queries_dir(), report_basename(q));
    io::write_file(base + ".neighbors.csv", csv);
    auto hits = retrieve(q, qv, l.vectors, &l.corpus);
    io::write_file(base + ".hits.csv", hits_to_csv(hits));
    r.artifacts.push_back(base + ".neighbors.csv");
    r.artifacts.push_back(base + ".hits.csv");
    Json top = Json::array();
    for (size_t i = 0; i < std::min<size_t>(5, neighbors.size()); ++i) top.push_back(neighbors[i].token);
    r.summary["queries"].push_back({{"label", q.label}, {"threshold", q.threshold}, {"hits", hits.size()}, {"top_neighbors", top}});
  }
  return r;
}

StageResult run_classify(const PipelineConfig &c) {
  require_file(c.embeddings_path(), "embedding file");
  auto queries = resolve_queries(c);
  Loaded l = load_downstream(c);
  io::ensure_dir(c.hits_dir());
  std::vector<DocLabel> all;
  StageResult r{"classify", {}, {{"queries", Json::array()}}};
  const auto ids = doc_ids(l.corpus);
  for (const auto &q : queries) {
    check_query_terms(q, l.embeddings);
    auto qv = embed_query(q.terms, l.stats, l.embeddings);
    auto scored = score_paragraphs(qv, l.vectors);
    auto labels = classify_documents(q, scored, ids);
    auto hits = select_hits(scored, q.threshold, HitOrder::kDescending, &l.corpus);
    std::string path = io::join_path(c.hits_dir(), report_basename(q) + ".hits.csv");
    io::write_file(path, hits_to_csv(hits));
    r.artifacts.push_back(path);
    size_t positives = std::count_if(labels.begin(), labels.end(), [](const DocLabel &d) { return d.predicted; });
    r.summary["queries"].push_back(
        {{"label", q.label}, {"threshold", q.threshold}, {"hits", hits.size()}, {"positive_documents", positives}});
    all.insert(all.end(), labels.begin(), labels.end());
  }
  io::write_file(c.labels_path(), labels_to_csv(all));
  r.artifacts.insert(r.artifacts.begin(), c.labels_path());
  return r;
}

StageResult run_evaluate(const PipelineConfig &c) {
  require_file(c.labels_path(), "predicted labels; run classify");
  require_file(c.paths.gold, "gold labels");
  auto predictions = labels_from_csv(io::read_file(c.labels_path()));
  auto gold = read_gold(c.paths.gold);
  std::map<std::string, std::string> country_of;
  if (io::exists(io::join_path(c.segmented_dir(), "documents.jsonl"))) {
    Corpus corpus = load_segmented(c);
    for (const auto &d : corpus.documents()) country_of[d.meta.doc_id] = d.meta.country;
  }
  MetricsReport m = score(predictions, gold, country_of);
  io::write_file(c.metrics_csv_path(), m.to_csv());
  io::write_file(c.metrics_text_path(), m.to_table());
  StageResult r{"evaluate", {c.metrics_csv_path(), c.metrics_text_path()}, {}};
  Json agenda = Json::array();
  for (const auto &row : m.rows) {
    agenda.push_back({{"agenda", row.agenda}, {"f1", row.f1}, {"precision", row.precision}, {"recall", row.recall},
                      {"accuracy", row.accuracy}});
  }
  r.summary = {{"macro_f1", m.macro.f1},
               {"macro_precision", m.macro.precision},
               {"macro_recall", m.macro.recall},
               {"macro_accuracy", m.macro.accuracy},
               {"agenda", agenda},
               {"unlabeled_predictions", m.unlabeled_predictions},
               {"unpredicted_gold", m.unpredicted_gold}};
  return r;
}

StageResult run_report(const PipelineConfig &c) {
  require_file(c.embeddings_path(), "embedding file");
  auto queries = resolve_queries(c);
  Loaded l = load_downstream(c);
  const std::string id = corpus_id(c);
  const auto ids = doc_ids(l.corpus);
  StageResult r{"report", {}, {{"reports", Json::array()}}};
  for (const auto &q : queries) {
    check_query_terms(q, l.embeddings);
    auto qv = embed_query(q.terms, l.stats, l.embeddings);
    auto scored = score_paragraphs(qv, l.vectors);
    auto hits = select_hits(scored, q.threshold, HitOrder::kDescending, &l.corpus);
    auto labels = classify_documents(q, scored, ids);
    auto report = generate_report(q, hits, labels, id, utc_timestamp(), &l.corpus);
    std::string path = write_report(c.reports_dir(), report);
    r.artifacts.push_back(path);
    r.summary["reports"].push_back({{"label", q.label}, {"path", path}, {"hits", report.hit_count}});
  }
  return r;
}

std::vector<StageResult> run_pipeline(const PipelineConfig &c) {
  std::vector<StageResult> out;
  out.push_back(run_ingest(c));
  if (!c.paths.background_dir.empty()) {
    out.push_back(run_train(c));
  } else {
    require_file(c.embeddings_path(), "embedding file (no background corpus to train on)");
  }
  out.push_back(run_vectorize(c));
  out.push_back(run_query(c));
  out.push_back(run_classify(c));
  if (!c.paths.gold.empty()) out.push_back(run_evaluate(c));
  out.push_back(run_report(c));
  return out;
}

std::shared_ptr<const ServiceState> load_service_state(const PipelineConfig &c) {
  Loaded l = load_downstream(c);
  std::string cid = corpus_id(c);
  std::string eid = io::checksum(io::read_file(c.embeddings_path()));
  return make_service_state(std::move(l.corpus), std::move(l.embeddings), std::move(l.stats), std::move(l.vectors),
                            cid, eid);
}

}  // namespace polir
