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

// C interface to the polir toolkit. All functions are thread-safe with respect
// to distinct handles. Failing calls return a non-zero status and record a
// message retrievable with polir_last_error() on the calling thread.
// Strings returned through `char **` out-parameters are owned by the caller
// and released with polir_string_free().

#ifndef POLIR_POLIR_H_
#define POLIR_POLIR_H_

#include <stdint.h>

#if defined(_WIN32)
#define POLIR_API __declspec(dllexport)
#else
#define POLIR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polir_status {
  POLIR_OK = 0,
  POLIR_ERR_INTERNAL = 1,
  POLIR_ERR_MISSING_INPUT = 2,
  POLIR_ERR_VALIDATION = 3,
  POLIR_ERR_PARSE = 4,
  POLIR_ERR_CONFIG = 5,
  POLIR_ERR_CONFLICT = 6,
  POLIR_ERR_NOT_FOUND = 7,
  POLIR_ERR_INGESTION = 8,
  POLIR_ERR_INVALID_ARGUMENT = 9, /* null handle or pointer */
} polir_status;

typedef struct polir_config polir_config;
typedef struct polir_session polir_session;
typedef struct polir_server polir_server;

POLIR_API const char *polir_version(void);
/* Short snake_case name such as "missing_input". Never null. */
POLIR_API const char *polir_status_name(polir_status status);
/* Process exit code for a status: 0 ok, 2 missing input, 1 internal, 3 other. */
POLIR_API int polir_exit_code(polir_status status);
/* Message of the last failure on this thread; empty after a success. */
POLIR_API const char *polir_last_error(void);
POLIR_API void polir_string_free(char *s);

/* Configuration. */
POLIR_API polir_status polir_config_new(polir_config **out);
POLIR_API polir_status polir_config_load(const char *path, polir_config **out);
POLIR_API polir_status polir_config_from_json(const char *json, const char *base_dir, polir_config **out);
POLIR_API void polir_config_free(polir_config *config);
POLIR_API polir_status polir_config_to_json(const polir_config *config, char **out_json);
POLIR_API polir_status polir_config_set_seed(polir_config *config, uint64_t seed);
POLIR_API polir_status polir_config_set_workers(polir_config *config, int workers);
POLIR_API polir_status polir_config_set_threshold(polir_config *config, double threshold);
POLIR_API polir_status polir_config_set_out(polir_config *config, const char *dir);
/* Adds a "<label>:<t1,t2,...>" query; inline queries replace the query file. */
POLIR_API polir_status polir_config_add_query(polir_config *config, const char *spec);

/* Runs one stage: "ingest", "train", "vectorize", "query", "classify",
 * "evaluate", "report", or "pipeline" for all of them. `out_summary` (may be
 * null) receives a JSON object describing the artifacts written. */
POLIR_API polir_status polir_run_stage(const polir_config *config, const char *stage, char **out_summary);

/* Writes the seeded synthetic fixture (study corpus, background corpus,
 * queries, gold labels, pipeline.json) under `dir`. */
POLIR_API polir_status polir_synthesize(const char *dir, uint64_t seed, char **out_summary);

/* Interactive sessions over the artifacts of a completed pipeline run.
 * `log_path` and `report_dir` may be null. */
POLIR_API polir_status polir_session_open(const polir_config *config, const char *log_path, const char *report_dir,
                                          polir_session **out);
POLIR_API void polir_session_free(polir_session *session);
/* Dispatches one request without a network round-trip. `query` is an
 * url-encoded "a=b&c=d" string and may be null, as may `body`. */
POLIR_API polir_status polir_session_handle(polir_session *session, const char *method, const char *path,
                                            const char *query, const char *body, int *out_http_status,
                                            char **out_body);

/* HTTP front end. Port 0 picks a free port; the bound port is returned in
 * `out_port`. The server runs on a background thread until stopped. */
POLIR_API polir_status polir_server_start(polir_session *session, const char *host, int port, const char *static_dir,
                                          polir_server **out, int *out_port);
/* Blocks until the server stops. */
POLIR_API polir_status polir_server_wait(polir_server *server);
POLIR_API void polir_server_stop(polir_server *server);
/* Stops the server if running and releases it. */
POLIR_API void polir_server_free(polir_server *server);

#ifdef __cplusplus
}
#endif

#endif  // POLIR_POLIR_H_
