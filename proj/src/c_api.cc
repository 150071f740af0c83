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

#include "polir/polir.h"

#include <cstring>
#include <exception>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "polir/error.h"
#include "polir/pipeline.h"
#include "polir/retrieval.h"
#include "polir/service.h"
#include "polir/synthetic.h"

struct polir_config {
  polir::PipelineConfig config;
};

struct polir_session {
  std::shared_ptr<polir::Session> session;
};

struct polir_server {
  std::unique_ptr<polir::Server> server;
  std::thread loop;
};

namespace {

thread_local std::string last_error;

polir_status fail(polir_status status, const std::string &message) {
  last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
polir_status guarded(Fn &&fn) {
  try {
    fn();
    last_error.clear();
    return POLIR_OK;
  } catch (const polir::Error &e) {
    return fail(static_cast<polir_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc &) {
    return fail(POLIR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(POLIR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(POLIR_ERR_INTERNAL, "unknown error");
  }
}

char *copy_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define POLIR_REQUIRE(cond, what) \
  if (!(cond)) return fail(POLIR_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char *polir_version(void) { return POLIR_VERSION; }

const char *polir_status_name(polir_status status) {
  switch (status) {
    case POLIR_OK: return "ok";
    case POLIR_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case POLIR_ERR_INTERNAL:
    case POLIR_ERR_MISSING_INPUT:
    case POLIR_ERR_VALIDATION:
    case POLIR_ERR_PARSE:
    case POLIR_ERR_CONFIG:
    case POLIR_ERR_CONFLICT:
    case POLIR_ERR_NOT_FOUND:
    case POLIR_ERR_INGESTION:
      return polir::error_code_name(static_cast<polir::ErrorCode>(static_cast<int>(status)));
  }
  return "unknown";
}

int polir_exit_code(polir_status status) {
  switch (status) {
    case POLIR_OK: return 0;
    case POLIR_ERR_MISSING_INPUT: return 2;
    case POLIR_ERR_INTERNAL: return 1;
    default: return 3;
  }
}

const char *polir_last_error(void) { return last_error.c_str(); }

void polir_string_free(char *s) { std::free(s); }

polir_status polir_config_new(polir_config **out) {
  POLIR_REQUIRE(out, "out must not be null");
  return guarded([&] { *out = new polir_config{}; });
}

polir_status polir_config_load(const char *path, polir_config **out) {
  POLIR_REQUIRE(path && out, "path and out must not be null");
  return guarded([&] { *out = new polir_config{polir::PipelineConfig::load(path)}; });
}

polir_status polir_config_from_json(const char *json, const char *base_dir, polir_config **out) {
  POLIR_REQUIRE(json && out, "json and out must not be null");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception &e) {
      throw polir::Error(polir::ErrorCode::kConfig, std::string("config JSON: ") + e.what());
    }
    *out = new polir_config{polir::PipelineConfig::from_json(j, base_dir ? base_dir : ".")};
  });
}

void polir_config_free(polir_config *config) { delete config; }

polir_status polir_config_to_json(const polir_config *config, char **out_json) {
  POLIR_REQUIRE(config && out_json, "config and out_json must not be null");
  return guarded([&] { *out_json = copy_string(config->config.to_json().dump(2)); });
}

polir_status polir_config_set_seed(polir_config *config, uint64_t seed) {
  POLIR_REQUIRE(config, "config must not be null");
  return guarded([&] {
    config->config.seed = seed;
    config->config.train.seed = seed;
  });
}

polir_status polir_config_set_workers(polir_config *config, int workers) {
  POLIR_REQUIRE(config, "config must not be null");
  return guarded([&] {
    if (workers < 1) throw polir::Error(polir::ErrorCode::kValidation, "workers must be >= 1");
    config->config.train.workers = workers;
  });
}

polir_status polir_config_set_threshold(polir_config *config, double threshold) {
  POLIR_REQUIRE(config, "config must not be null");
  return guarded([&] {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
      throw polir::Error(polir::ErrorCode::kValidation, "threshold must lie in (0, 1]");
    }
    config->config.threshold = threshold;
  });
}

polir_status polir_config_set_out(polir_config *config, const char *dir) {
  POLIR_REQUIRE(config && dir, "config and dir must not be null");
  return guarded([&] {
    if (*dir == '\0') throw polir::Error(polir::ErrorCode::kValidation, "output directory must not be empty");
    config->config.paths.out = dir;
  });
}

polir_status polir_config_add_query(polir_config *config, const char *spec) {
  POLIR_REQUIRE(config && spec, "config and spec must not be null");
  return guarded([&] { config->config.inline_queries.push_back(polir::parse_query_spec(spec)); });
}

polir_status polir_run_stage(const polir_config *config, const char *stage, char **out_summary) {
  POLIR_REQUIRE(config && stage, "config and stage must not be null");
  return guarded([&] {
    const polir::PipelineConfig &c = config->config;
    const std::string name = stage;
    std::vector<polir::StageResult> results;
    if (name == "ingest") results.push_back(polir::run_ingest(c));
    else if (name == "train") results.push_back(polir::run_train(c));
    else if (name == "vectorize") results.push_back(polir::run_vectorize(c));
    else if (name == "query") results.push_back(polir::run_query(c));
    else if (name == "classify") results.push_back(polir::run_classify(c));
    else if (name == "evaluate") results.push_back(polir::run_evaluate(c));
    else if (name == "report") results.push_back(polir::run_report(c));
    else if (name == "pipeline") results = polir::run_pipeline(c);
    else throw polir::Error(polir::ErrorCode::kValidation, "unknown stage '" + name + "'");
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto &r : results) {
      summary.push_back({{"stage", r.stage}, {"artifacts", r.artifacts}, {"summary", r.summary}});
    }
    if (out_summary) *out_summary = copy_string((results.size() == 1 ? summary[0] : summary).dump());
  });
}

polir_status polir_synthesize(const char *dir, uint64_t seed, char **out_summary) {
  POLIR_REQUIRE(dir, "dir must not be null");
  return guarded([&] {
    polir::SyntheticConfig cfg;
    cfg.seed = seed;
    auto fx = polir::write_synthetic_fixture(dir, cfg);
    nlohmann::ordered_json j = {{"config", fx.config},         {"manifest", fx.manifest}, {"background_dir", fx.background_dir},
                                {"queries", fx.queries},       {"gold", fx.gold},         {"gold_labels", fx.gold_labels},
                                {"gold_positives", fx.gold_positives}};
    if (out_summary) *out_summary = copy_string(j.dump());
  });
}

polir_status polir_session_open(const polir_config *config, const char *log_path, const char *report_dir,
                                polir_session **out) {
  POLIR_REQUIRE(config && out, "config and out must not be null");
  return guarded([&] {
    polir::SessionOptions opts;
    if (log_path) opts.log_path = log_path;
    if (report_dir) opts.report_dir = report_dir;
    auto state = polir::load_service_state(config->config);
    *out = new polir_session{std::make_shared<polir::Session>(state, opts)};
  });
}

void polir_session_free(polir_session *session) { delete session; }

polir_status polir_session_handle(polir_session *session, const char *method, const char *path, const char *query,
                                  const char *body, int *out_http_status, char **out_body) {
  POLIR_REQUIRE(session && method && path && out_http_status, "session, method, path and status must not be null");
  return guarded([&] {
    httplib::Params parsed;
    if (query) httplib::detail::parse_query_text(query, parsed);
    std::map<std::string, std::string> params(parsed.begin(), parsed.end());
    auto r = session->session->handle(method, path, params, body ? body : "");
    *out_http_status = r.status;
    if (out_body) *out_body = copy_string(r.body.dump());
  });
}

polir_status polir_server_start(polir_session *session, const char *host, int port, const char *static_dir,
                                polir_server **out, int *out_port) {
  POLIR_REQUIRE(session && host && out, "session, host and out must not be null");
  return guarded([&] {
    if (port < 0 || port > 65535) throw polir::Error(polir::ErrorCode::kValidation, "port must lie in [0, 65535]");
    auto server = std::make_unique<polir_server>();
    server->server = std::make_unique<polir::Server>(session->session, static_dir ? static_dir : "");
    int bound = server->server->bind(host, port);
    if (bound < 0) {
      throw polir::Error(polir::ErrorCode::kConfig, "cannot bind " + std::string(host) + ":" + std::to_string(port));
    }
    polir::Server *raw = server->server.get();
    server->loop = std::thread([raw] { raw->listen(); });
    if (out_port) *out_port = bound;
    *out = server.release();
  });
}

polir_status polir_server_wait(polir_server *server) {
  POLIR_REQUIRE(server, "server must not be null");
  return guarded([&] {
    if (server->loop.joinable()) server->loop.join();
  });
}

void polir_server_stop(polir_server *server) {
  if (server) server->server->stop();
}

void polir_server_free(polir_server *server) {
  if (!server) return;
  server->server->stop();
  if (server->loop.joinable()) server->loop.join();
  delete server;
}

}  // extern "C"
