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

// Local HTTP+JSON service for interactive query building: neighbour
// exploration, term editing, threshold descent and classification preview.
//
// Session::handle is a pure request dispatcher; Server binds it to HTTP.
// Every mutation of a query draft is appended to the session log, and a
// draft's state is the replay of its events.

#ifndef POLIR_SERVICE_H_
#define POLIR_SERVICE_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "polir/corpus.h"
#include "polir/retrieval.h"
#include "polir/skipgram.h"
#include "polir/vectorizer.h"

namespace httplib {
class Server;
}

namespace polir {

// Read-only data shared by all requests.
struct ServiceState {
  Corpus corpus;
  Embeddings embeddings;
  TfidfStats stats;
  std::vector<ParagraphVector> vectors;
  std::string corpus_id;
  std::string embedding_id;
};

// Paragraph vectors are computed when `vectors` is empty.
std::shared_ptr<const ServiceState> make_service_state(Corpus corpus, Embeddings embeddings, TfidfStats stats,
                                                       std::vector<ParagraphVector> vectors, std::string corpus_id,
                                                       std::string embedding_id);

struct QueryDraft {
  std::string id;
  AgendaQuery query;
  bool accepted = false;
  std::string created_at;
  std::vector<nlohmann::json> history;
};

// Drafts rebuilt from a sequence of log events, in creation order. Throws
// kParse for an event that cannot be applied.
std::vector<QueryDraft> replay_events(const std::vector<nlohmann::json> &events);

struct SessionOptions {
  std::string session_id = "default";
  // Append-only JSONL event log; replayed on construction when it exists.
  // Empty keeps the session in memory.
  std::string log_path;
  // Accepted queries write their reports here; empty disables writing.
  std::string report_dir;
  double threshold_step = kDefaultThresholdStep;
  double threshold_floor = kDefaultThresholdFloor;
  std::function<std::string()> clock;  // defaults to utc_timestamp
};

struct Response {
  int status = 200;
  nlohmann::ordered_json body;
};

class Session {
 public:
  Session(std::shared_ptr<const ServiceState> state, SessionOptions options);

  Response handle(const std::string &method, const std::string &path,
                  const std::map<std::string, std::string> &params, const std::string &body);

  std::vector<QueryDraft> drafts() const;
  std::vector<nlohmann::json> events() const;
  const ServiceState &state() const { return *state_; }

 private:
  struct Request;

  Response neighbors(const Request &r) const;
  Response session_info() const;
  Response document_page(const std::string &doc_id, const std::string &page) const;
  Response create_query(const Request &r);
  Response list_queries() const;
  Response get_query(const std::string &id) const;
  Response patch_query(const std::string &id, const Request &r);
  Response query_hits(const std::string &id, const Request &r) const;
  Response descend(const std::string &id);
  Response accept(const std::string &id);
  Response classify(const std::string &id) const;

  QueryDraft &draft_or_throw(const std::string &id);
  const QueryDraft &draft_or_throw(const std::string &id) const;
  void check_terms(const std::vector<std::string> &terms) const;
  std::vector<ScoredParagraph> score(const AgendaQuery &q) const;
  void record(QueryDraft &draft, nlohmann::json event);

  std::shared_ptr<const ServiceState> state_;
  SessionOptions options_;
  mutable std::mutex mu_;  // guards drafts_, events_, next_id_ and the log
  std::vector<QueryDraft> drafts_;
  std::vector<nlohmann::json> events_;
  int next_id_ = 1;
};

// cpp-httplib front end for a Session.
class Server {
 public:
  // `static_dir`, when set, is served under /ui.
  explicit Server(std::shared_ptr<Session> session, std::string static_dir = {});
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  // Binds host:port (port 0 picks a free one) and returns the bound port,
  // or -1 on failure.
  int bind(const std::string &host, int port);
  // Serves until stop(); blocks.
  bool listen();
  void stop();

 private:
  std::shared_ptr<Session> session_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace polir

#endif  // POLIR_SERVICE_H_
