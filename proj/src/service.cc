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

#include "polir/service.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "httplib.h"
#include "polir/error.h"
#include "polir/io.h"
#include "polir/report.h"

namespace polir {

namespace {

using Json = nlohmann::ordered_json;

struct ApiError {
  int status;
  std::string code;
  std::string message;
  Json detail = Json::object();
};

Response error_response(const ApiError &e) {
  Response r;
  r.status = e.status;
  r.body = Json{{"code", e.code}, {"message", e.message}, {"detail", e.detail}};
  return r;
}

Response ok(Json body, int status = 200) {
  Response r;
  r.status = status;
  r.body = std::move(body);
  return r;
}

ApiError from_error(const Error &e) {
  switch (e.code()) {
    case ErrorCode::kValidation: return {422, "invalid", e.what()};
    case ErrorCode::kNotFound: return {404, "not_found", e.what()};
    case ErrorCode::kConflict: return {409, "conflict", e.what()};
    case ErrorCode::kParse: return {400, "bad_request", e.what()};
    case ErrorCode::kMissingInput: return {404, "not_found", e.what()};
    default: return {500, "internal", e.what()};
  }
}

std::vector<std::string> split_path(const std::string &path) {
  std::vector<std::string> parts;
  for (auto &p : io::split(path, '/')) {
    if (!p.empty()) parts.push_back(p);
  }
  return parts;
}

Json hit_json(const RetrievalHit &h) {
  return {{"para_id", h.para_id},
          {"doc_id", h.doc_id},
          {"page_number", h.page_number},
          {"similarity", h.similarity},
          {"excerpt", h.excerpt}};
}

Json hits_json(const std::vector<RetrievalHit> &hits) {
  Json a = Json::array();
  for (const auto &h : hits) a.push_back(hit_json(h));
  return a;
}

Json label_json(const DocLabel &l) {
  Json j = {{"doc_id", l.doc_id}, {"agenda", l.label}, {"predicted", l.predicted}};
  if (l.best_similarity == kNoSimilarity) {
    j["best_similarity"] = nullptr;
  } else {
    j["best_similarity"] = l.best_similarity;
  }
  j["best_para_id"] = l.best_para_id;
  j["best_page"] = l.best_page;
  return j;
}

Json draft_json(const QueryDraft &d, bool with_history) {
  Json j = {{"id", d.id},
            {"label", d.query.label},
            {"terms", d.query.terms},
            {"threshold", d.query.threshold},
            {"notes", d.query.notes},
            {"accepted", d.accepted},
            {"created_at", d.created_at},
            {"revision", d.history.size()}};
  if (with_history) {
    Json h = Json::array();
    for (const auto &e : d.history) h.push_back(Json::parse(e.dump()));
    j["history"] = std::move(h);
  }
  return j;
}

std::string param(const std::map<std::string, std::string> &params, const std::string &key,
                  const std::string &fallback = {}) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

long parse_long(const std::string &text, const std::string &name) {
  long v = 0;
  std::istringstream in(text);
  std::string rest;
  if (!(in >> v) || (in >> rest)) throw ApiError{400, "bad_request", name + " must be an integer"};
  return v;
}

std::vector<std::string> split_terms(const std::string &text) {
  std::vector<std::string> terms;
  for (const auto &t : io::split(text, ',')) {
    std::string n = normalize_term(t);
    if (!n.empty()) terms.push_back(n);
  }
  return terms;
}

ApiError cap_error(const std::string &label) {
  return {409, "term_cap",
          "query '" + label + "' already has " + std::to_string(kMaxQueryTerms) + " terms; a query holds at most five words",
          Json{{"max_terms", kMaxQueryTerms}}};
}

void apply_event(std::map<std::string, size_t> &index, std::vector<QueryDraft> &drafts, const nlohmann::json &e) {
  const std::string op = e.at("op").get<std::string>();
  const std::string id = e.at("query_id").get<std::string>();
  if (op == "create") {
    if (index.count(id)) throw Error(ErrorCode::kParse, "event creates existing query " + id);
    QueryDraft d;
    d.id = id;
    d.query.label = e.at("label").get<std::string>();
    d.query.terms = e.at("terms").get<std::vector<std::string>>();
    d.query.threshold = e.at("threshold").get<double>();
    d.query.notes = e.value("notes", "");
    d.created_at = e.value("time", "");
    index.emplace(id, drafts.size());
    drafts.push_back(std::move(d));
  } else {
    auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorCode::kParse, "event for unknown query " + id);
    QueryDraft &d = drafts[it->second];
    auto &terms = d.query.terms;
    if (op == "add_term") {
      terms.push_back(e.at("term").get<std::string>());
    } else if (op == "remove_term") {
      auto t = std::find(terms.begin(), terms.end(), e.at("term").get<std::string>());
      if (t == terms.end()) throw Error(ErrorCode::kParse, "event removes absent term from " + id);
      terms.erase(t);
    } else if (op == "set_threshold" || op == "descend") {
      d.query.threshold = e.at("threshold").get<double>();
    } else if (op == "set_notes") {
      d.query.notes = e.at("notes").get<std::string>();
    } else if (op == "accept") {
      d.accepted = true;
    } else {
      throw Error(ErrorCode::kParse, "unknown event op '" + op + "'");
    }
  }
  drafts[index.at(id)].history.push_back(e);
}

}  // namespace

std::vector<QueryDraft> replay_events(const std::vector<nlohmann::json> &events) {
  std::vector<QueryDraft> drafts;
  std::map<std::string, size_t> index;
  for (const auto &e : events) {
    try {
      apply_event(index, drafts, e);
    } catch (const nlohmann::json::exception &ex) {
      throw Error(ErrorCode::kParse, std::string("malformed session event: ") + ex.what());
    }
  }
  return drafts;
}

std::shared_ptr<const ServiceState> make_service_state(Corpus corpus, Embeddings embeddings, TfidfStats stats,
                                                       std::vector<ParagraphVector> vectors, std::string corpus_id,
                                                       std::string embedding_id) {
  auto s = std::make_shared<ServiceState>();
  s->corpus = std::move(corpus);
  s->embeddings = std::move(embeddings);
  s->stats = std::move(stats);
  s->vectors = vectors.empty() ? embed_corpus(s->corpus, s->stats, s->embeddings) : std::move(vectors);
  s->corpus_id = std::move(corpus_id);
  s->embedding_id = std::move(embedding_id);
  return s;
}

struct Session::Request {
  std::string method;
  std::map<std::string, std::string> params;
  std::string raw_body;

  nlohmann::json body() const {
    if (io::trim(raw_body).empty()) return nlohmann::json::object();
    try {
      auto j = nlohmann::json::parse(raw_body);
      if (!j.is_object()) throw ApiError{400, "bad_request", "request body must be a JSON object"};
      return j;
    } catch (const nlohmann::json::exception &e) {
      throw ApiError{400, "bad_request", std::string("malformed JSON body: ") + e.what()};
    }
  }
};

Session::Session(std::shared_ptr<const ServiceState> state, SessionOptions options)
    : state_(std::move(state)), options_(std::move(options)) {
  if (!options_.clock) options_.clock = utc_timestamp;
  if (!options_.log_path.empty() && io::exists(options_.log_path)) {
    std::istringstream in(io::read_file(options_.log_path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (io::trim(line).empty()) continue;
      try {
        events_.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::kParse, options_.log_path + " line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    drafts_ = replay_events(events_);
    for (const auto &d : drafts_) {
      if (d.id.size() > 1 && d.id[0] == 'q') next_id_ = std::max(next_id_, std::atoi(d.id.c_str() + 1) + 1);
    }
  }
}

std::vector<QueryDraft> Session::drafts() const {
  std::lock_guard<std::mutex> lock(mu_);
  return drafts_;
}

std::vector<nlohmann::json> Session::events() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_;
}

Response Session::handle(const std::string &method, const std::string &path,
                         const std::map<std::string, std::string> &params, const std::string &body) {
  Request r{method, params, body};
  auto parts = split_path(path);
  auto is = [&](const char *m) { return method == m; };
  try {
    auto wrong_method = [&]() { return error_response({405, "method_not_allowed", method + " not allowed on " + path}); };
    if (parts.size() == 1 && parts[0] == "neighbors") return is("GET") ? neighbors(r) : wrong_method();
    if (parts.size() == 1 && parts[0] == "session") return is("GET") ? session_info() : wrong_method();
    if (parts.size() == 1 && parts[0] == "health") return ok(Json{{"status", "ok"}});
    if (parts.size() == 4 && parts[0] == "documents" && parts[2] == "pages") {
      return is("GET") ? document_page(parts[1], parts[3]) : wrong_method();
    }
    if (parts.size() == 2 && parts[0] == "classify") return is("POST") ? classify(parts[1]) : wrong_method();
    if (!parts.empty() && parts[0] == "queries") {
      if (parts.size() == 1) {
        if (is("POST")) return create_query(r);
        if (is("GET")) return list_queries();
        return wrong_method();
      }
      const std::string &id = parts[1];
      if (parts.size() == 2) {
        if (is("GET")) return get_query(id);
        if (is("PATCH")) return patch_query(id, r);
        return wrong_method();
      }
      if (parts.size() == 3) {
        if (parts[2] == "hits") return is("GET") ? query_hits(id, r) : wrong_method();
        if (parts[2] == "descend") return is("POST") ? descend(id) : wrong_method();
        if (parts[2] == "accept") return is("POST") ? accept(id) : wrong_method();
        if (parts[2] == "classify") return is("POST") ? classify(id) : wrong_method();
      }
    }
    return error_response({404, "not_found", "no endpoint " + method + " " + path});
  } catch (const ApiError &e) {
    return error_response(e);
  } catch (const Error &e) {
    return error_response(from_error(e));
  } catch (const std::exception &e) {
    return error_response({500, "internal", e.what()});
  }
}

void Session::check_terms(const std::vector<std::string> &terms) const {
  for (const auto &t : terms) {
    if (state_->embeddings.index_of(t) >= 0) continue;
    auto suggestions = suggest_terms(t, state_->embeddings);
    throw ApiError{422, "unknown_term", "term '" + t + "' has no embedding",
                   Json{{"term", t}, {"suggestions", suggestions}}};
  }
}

std::vector<ScoredParagraph> Session::score(const AgendaQuery &q) const {
  auto v = embed_query(q.terms, state_->stats, state_->embeddings);
  return score_paragraphs(v, state_->vectors);
}

Response Session::neighbors(const Request &r) const {
  auto terms = split_terms(param(r.params, "terms"));
  if (terms.empty()) throw ApiError{400, "bad_request", "terms must name at least one term"};
  long k = static_cast<long>(kDefaultNeighbors);
  if (r.params.count("k")) k = parse_long(param(r.params, "k"), "k");
  if (k < 1) throw ApiError{400, "bad_request", "k must be >= 1"};
  if (terms.size() > kMaxQueryTerms) throw cap_error("neighbors");
  check_terms(terms);
  auto v = embed_query(terms, state_->stats, state_->embeddings);
  auto near = nearest_words(v, state_->embeddings, static_cast<size_t>(k),
                            std::set<std::string>(terms.begin(), terms.end()));
  Json list = Json::array();
  for (const auto &n : near) list.push_back({{"token", n.token}, {"similarity", n.similarity}});
  return ok(Json{{"terms", terms}, {"k", k}, {"neighbors", std::move(list)}});
}

Response Session::session_info() const {
  std::lock_guard<std::mutex> lock(mu_);
  Json queries = Json::array();
  for (const auto &d : drafts_) queries.push_back(draft_json(d, false));
  return ok(Json{{"session_id", options_.session_id},
                 {"corpus_id", state_->corpus_id},
                 {"embedding_id", state_->embedding_id},
                 {"document_count", state_->corpus.size()},
                 {"paragraph_count", state_->vectors.size()},
                 {"vocabulary_size", state_->embeddings.size()},
                 {"dim", state_->embeddings.dim()},
                 {"threshold_step", options_.threshold_step},
                 {"threshold_floor", options_.threshold_floor},
                 {"event_count", events_.size()},
                 {"queries", std::move(queries)}});
}

Response Session::document_page(const std::string &doc_id, const std::string &page) const {
  const Document *d = state_->corpus.find(doc_id);
  if (!d) throw ApiError{404, "not_found", "no document '" + doc_id + "'"};
  long n = parse_long(page, "page number");
  if (n < 1 || n > static_cast<long>(d->pages.size())) {
    throw ApiError{404, "not_found", "document '" + doc_id + "' has no page " + page,
                   Json{{"page_count", d->pages.size()}}};
  }
  Json paras = Json::array();
  for (const auto &p : d->paragraphs) {
    if (p.page_number == n) paras.push_back({{"para_id", p.para_id}, {"text", p.text()}});
  }
  size_t i = static_cast<size_t>(n - 1);
  return ok(Json{{"doc_id", doc_id},
                 {"title", d->meta.title},
                 {"page_number", n},
                 {"page_count", d->pages.size()},
                 {"text", d->pages[i]},
                 {"raw_text", i < d->raw_pages.size() ? d->raw_pages[i] : std::string()},
                 {"paragraphs", std::move(paras)}});
}

QueryDraft &Session::draft_or_throw(const std::string &id) {
  for (auto &d : drafts_) {
    if (d.id == id) return d;
  }
  throw ApiError{404, "not_found", "no query '" + id + "'"};
}

const QueryDraft &Session::draft_or_throw(const std::string &id) const {
  return const_cast<Session *>(this)->draft_or_throw(id);
}

void Session::record(QueryDraft &draft, nlohmann::json event) {
  event["seq"] = events_.size() + 1;
  event["session"] = options_.session_id;
  event["query_id"] = draft.id;
  event["time"] = options_.clock();
  if (!options_.log_path.empty()) {
    std::ofstream out(options_.log_path, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::kInternal, "cannot append to session log " + options_.log_path);
    out << event.dump() << "\n";
    out.flush();
    if (!out) throw Error(ErrorCode::kInternal, "cannot append to session log " + options_.log_path);
  }
  events_.push_back(event);
  draft.history.push_back(std::move(event));
}

Response Session::create_query(const Request &r) {
  auto body = r.body();
  AgendaQuery q;
  try {
    q.label = io::trim(body.value("label", ""));
    if (body.contains("terms")) {
      const auto &t = body["terms"];
      if (t.is_string()) {
        q.terms = split_terms(t.get<std::string>());
      } else {
        for (const auto &x : t) {
          std::string n = normalize_term(x.get<std::string>());
          if (!n.empty() && std::find(q.terms.begin(), q.terms.end(), n) == q.terms.end()) q.terms.push_back(n);
        }
      }
    }
    q.threshold = body.value("threshold", kDefaultThreshold);
    q.notes = body.value("notes", "");
  } catch (const nlohmann::json::exception &e) {
    throw ApiError{400, "bad_request", std::string("malformed query: ") + e.what()};
  }
  if (q.terms.size() > kMaxQueryTerms) throw cap_error(q.label);
  q.validate();
  check_terms(q.terms);

  std::lock_guard<std::mutex> lock(mu_);
  QueryDraft d;
  d.id = "q" + std::to_string(next_id_++);
  d.query = q;
  drafts_.push_back(std::move(d));
  QueryDraft &stored = drafts_.back();
  record(stored, {{"op", "create"}, {"label", q.label}, {"terms", q.terms}, {"threshold", q.threshold}, {"notes", q.notes}});
  stored.created_at = stored.history.back().value("time", "");
  return ok(draft_json(stored, true), 201);
}

Response Session::list_queries() const {
  std::lock_guard<std::mutex> lock(mu_);
  Json list = Json::array();
  for (const auto &d : drafts_) list.push_back(draft_json(d, false));
  return ok(Json{{"queries", std::move(list)}});
}

Response Session::get_query(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return ok(draft_json(draft_or_throw(id), true));
}

Response Session::patch_query(const std::string &id, const Request &r) {
  auto body = r.body();
  std::lock_guard<std::mutex> lock(mu_);
  QueryDraft &d = draft_or_throw(id);
  if (d.accepted) throw ApiError{409, "frozen", "query '" + id + "' was accepted and can no longer change"};
  std::string op = body.value("op", "");
  try {
    if (op == "add_term") {
      std::string term = normalize_term(body.at("term").get<std::string>());
      if (term.empty()) throw ApiError{400, "bad_request", "term is empty"};
      if (std::find(d.query.terms.begin(), d.query.terms.end(), term) != d.query.terms.end()) {
        throw ApiError{409, "duplicate_term", "query '" + id + "' already contains '" + term + "'"};
      }
      if (d.query.terms.size() >= kMaxQueryTerms) throw cap_error(d.query.label);
      check_terms({term});
      d.query.terms.push_back(term);
      record(d, {{"op", "add_term"}, {"term", term}});
    } else if (op == "remove_term") {
      std::string term = normalize_term(body.at("term").get<std::string>());
      auto it = std::find(d.query.terms.begin(), d.query.terms.end(), term);
      if (it == d.query.terms.end()) throw ApiError{422, "invalid", "query '" + id + "' has no term '" + term + "'"};
      if (d.query.terms.size() == 1) throw ApiError{422, "invalid", "a query needs at least one term"};
      d.query.terms.erase(it);
      record(d, {{"op", "remove_term"}, {"term", term}});
    } else if (op == "set_threshold") {
      const auto &t = body.at("threshold");
      if (!t.is_number()) throw ApiError{400, "bad_request", "threshold must be a number"};
      double theta = t.get<double>();
      if (!(theta > 0.0 && theta <= 1.0)) {
        throw ApiError{422, "invalid", "threshold must be in (0, 1]", Json{{"threshold", theta}}};
      }
      d.query.threshold = theta;
      record(d, {{"op", "set_threshold"}, {"threshold", theta}});
    } else if (op == "set_notes") {
      d.query.notes = body.at("notes").get<std::string>();
      record(d, {{"op", "set_notes"}, {"notes", d.query.notes}});
    } else {
      throw ApiError{400, "bad_request", "op must be one of add_term, remove_term, set_threshold, set_notes"};
    }
  } catch (const nlohmann::json::exception &e) {
    throw ApiError{400, "bad_request", std::string("malformed patch: ") + e.what()};
  }
  return ok(draft_json(d, true));
}

Response Session::query_hits(const std::string &id, const Request &r) const {
  AgendaQuery q;
  {
    std::lock_guard<std::mutex> lock(mu_);
    q = draft_or_throw(id).query;
  }
  std::string order_text = param(r.params, "order", "desc");
  if (order_text != "asc" && order_text != "desc") throw ApiError{400, "bad_request", "order must be asc or desc"};
  HitOrder order = order_text == "asc" ? HitOrder::kAscending : HitOrder::kDescending;
  auto hits = select_hits(score(q), q.threshold, order, &state_->corpus);
  const size_t total = hits.size();
  if (r.params.count("limit")) {
    long limit = parse_long(param(r.params, "limit"), "limit");
    if (limit < 0) throw ApiError{400, "bad_request", "limit must be >= 0"};
    if (static_cast<size_t>(limit) < hits.size()) hits.resize(static_cast<size_t>(limit));
  }
  Json body = {{"query_id", id}, {"threshold", q.threshold}, {"order", order_text}, {"total", total}};
  if (r.params.count("shuffle_seed")) {
    long seed = parse_long(param(r.params, "shuffle_seed"), "shuffle_seed");
    Rng rng(static_cast<uint64_t>(seed));
    for (size_t i = hits.size(); i > 1; --i) std::swap(hits[i - 1], hits[rng.below(i)]);
    body["shuffle_seed"] = seed;
  }
  body["hits"] = hits_json(hits);
  return ok(std::move(body));
}

Response Session::descend(const std::string &id) {
  std::lock_guard<std::mutex> lock(mu_);
  QueryDraft &d = draft_or_throw(id);
  if (d.accepted) throw ApiError{409, "frozen", "query '" + id + "' was accepted and can no longer change"};
  const double from = d.query.threshold;
  const double to = threshold_at(from, options_.threshold_step, 1);
  if (to < options_.threshold_floor - 1e-12) {
    throw ApiError{409, "floor_reached", "threshold cannot go below " + io::format_fixed(options_.threshold_floor, 2),
                   Json{{"threshold", from}, {"floor", options_.threshold_floor}}};
  }
  auto scored = score(d.query);
  auto admitted = hits_between(scored, to, from, HitOrder::kDescending, &state_->corpus);
  size_t total = select_hits(scored, to).size();
  d.query.threshold = to;
  record(d, {{"op", "descend"}, {"from", from}, {"threshold", to}});
  return ok(Json{{"query_id", id},
                 {"previous_threshold", from},
                 {"threshold", to},
                 {"total", total},
                 {"admitted", hits_json(admitted)}});
}

Response Session::accept(const std::string &id) {
  std::lock_guard<std::mutex> lock(mu_);
  QueryDraft &d = draft_or_throw(id);
  if (d.accepted) throw ApiError{409, "frozen", "query '" + id + "' was already accepted"};
  auto scored = score(d.query);
  auto hits = select_hits(scored, d.query.threshold, HitOrder::kDescending, &state_->corpus);
  std::vector<std::string> ids;
  for (const auto &doc : state_->corpus.documents()) ids.push_back(doc.meta.doc_id);
  auto labels = classify_documents(d.query, scored, ids);
  std::string now = options_.clock();
  auto report = generate_report(d.query, hits, labels, state_->corpus_id, now, &state_->corpus);
  std::string path;
  if (!options_.report_dir.empty()) path = write_report(options_.report_dir, report);
  d.accepted = true;
  record(d, {{"op", "accept"}, {"threshold", d.query.threshold}});
  return ok(Json{{"query", draft_json(d, false)}, {"report_path", path}, {"report", render_json(report)}});
}

Response Session::classify(const std::string &id) const {
  AgendaQuery q;
  {
    std::lock_guard<std::mutex> lock(mu_);
    q = draft_or_throw(id).query;
  }
  std::vector<std::string> ids;
  for (const auto &doc : state_->corpus.documents()) ids.push_back(doc.meta.doc_id);
  auto labels = classify_documents(q, score(q), ids);
  Json list = Json::array();
  size_t positives = 0;
  for (const auto &l : labels) {
    positives += l.predicted ? 1 : 0;
    list.push_back(label_json(l));
  }
  return ok(Json{{"query_id", id}, {"threshold", q.threshold}, {"positive_documents", positives}, {"labels", std::move(list)}});
}

// ---------------------------------------------------------------------------
// Server

Server::Server(std::shared_ptr<Session> session, std::string static_dir)
    : session_(std::move(session)), http_(std::make_unique<httplib::Server>()) {
  if (!static_dir.empty()) http_->set_mount_point("/ui", static_dir);
  auto handler = [this](const httplib::Request &req, httplib::Response &res) {
    std::map<std::string, std::string> params;
    for (const auto &[k, v] : req.params) params.emplace(k, v);
    Response r = session_->handle(req.method, req.path, params, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  http_->Get(".*", handler);
  http_->Post(".*", handler);
  http_->Patch(".*", handler);
  http_->Put(".*", handler);
  http_->Delete(".*", handler);
}

Server::~Server() { stop(); }

int Server::bind(const std::string &host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

bool Server::listen() { return http_->listen_after_bind(); }

void Server::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

}  // namespace polir
