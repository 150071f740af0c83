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

// polir command-line driver. Each subcommand runs one pipeline stage through
// the C interface and prints a JSON summary on stdout. Failures print one line
// on stderr of the form
//   polir: error=<kind> exit=<code> message=<text>
// and exit 2 for missing inputs, 3 for invalid input or configuration and 1
// for internal errors.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polir/polir.h"

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<double> threshold;
  std::vector<std::string> queries;
  std::string out;
};

int report_failure(const std::string &kind, int code, std::string message) {
  for (char &c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::fprintf(stderr, "polir: error=%s exit=%d message=%s\n", kind.c_str(), code, message.c_str());
  return code;
}

int report_status(polir_status status) {
  return report_failure(polir_status_name(status), polir_exit_code(status), polir_last_error());
}

// Owns a C handle and its release function.
template <typename T, void (*Free)(T *)>
class Handle {
 public:
  Handle() = default;
  ~Handle() {
    if (ptr_) Free(ptr_);
  }
  Handle(const Handle &) = delete;
  Handle &operator=(const Handle &) = delete;
  T **out() { return &ptr_; }
  T *get() const { return ptr_; }

 private:
  T *ptr_ = nullptr;
};

using Config = Handle<polir_config, polir_config_free>;
using SessionHandle = Handle<polir_session, polir_session_free>;
using ServerHandle = Handle<polir_server, polir_server_free>;

void print_and_free(char *json) {
  if (json) {
    std::printf("%s\n", json);
    std::fflush(stdout);
    polir_string_free(json);
  }
}

// Builds the configuration from --config plus overrides.
polir_status make_config(const GlobalFlags &flags, Config *config) {
  polir_status s = flags.config.empty() ? polir_config_new(config->out())
                                        : polir_config_load(flags.config.c_str(), config->out());
  if (s != POLIR_OK) return s;
  if (flags.seed && (s = polir_config_set_seed(config->get(), *flags.seed)) != POLIR_OK) return s;
  if (flags.workers && (s = polir_config_set_workers(config->get(), *flags.workers)) != POLIR_OK) return s;
  if (flags.threshold && (s = polir_config_set_threshold(config->get(), *flags.threshold)) != POLIR_OK) return s;
  if (!flags.out.empty() && (s = polir_config_set_out(config->get(), flags.out.c_str())) != POLIR_OK) return s;
  for (const auto &q : flags.queries) {
    if ((s = polir_config_add_query(config->get(), q.c_str())) != POLIR_OK) return s;
  }
  return POLIR_OK;
}

int run_stage(const GlobalFlags &flags, const std::string &stage) {
  Config config;
  polir_status s = make_config(flags, &config);
  if (s != POLIR_OK) return report_status(s);
  char *summary = nullptr;
  s = polir_run_stage(config.get(), stage.c_str(), &summary);
  if (s != POLIR_OK) return report_status(s);
  print_and_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"polir: agenda classification with skip-gram embeddings and tf-idf paragraph vectors"};
  app.set_version_flag("--version", std::string(polir_version()));
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "Pipeline configuration JSON");
  app.add_option("--seed", flags.seed, "Seed for every stochastic stage");
  app.add_option("--workers", flags.workers, "Training threads; 1 is bit-reproducible");
  app.add_option("--threshold", flags.threshold, "Cosine threshold override in (0, 1]");
  app.add_option("--query", flags.queries, "Inline query \"<label>:<t1,t2,...>\"; repeatable");
  app.add_option("--out", flags.out, "Output directory override");

  const std::vector<std::pair<std::string, std::string>> stages = {
      {"ingest", "Clean, spell-correct and segment the study corpus"},
      {"train", "Learn phrases and skip-gram embeddings on the background corpus"},
      {"vectorize", "Fit tf-idf statistics and compose paragraph vectors"},
      {"query", "Write nearest neighbors and hits for each query"},
      {"classify", "Label documents and write per-query hits"},
      {"evaluate", "Score labels against gold labels"},
      {"report", "Write per-query audit reports"},
      {"pipeline", "Run every stage in order"}};
  std::string selected;
  for (const auto &[name, help] : stages) {
    app.add_subcommand(name, help)->fallthrough()->callback([&selected, n = name] { selected = n; });
  }

  std::string synth_dir;
  uint64_t synth_seed = 2026;
  auto *synth = app.add_subcommand("synth", "Write the seeded synthetic fixture corpus")->fallthrough();
  synth->add_option("dir", synth_dir, "Destination directory")->required();
  synth->add_option("--fixture-seed", synth_seed, "Generator seed");

  std::string host = "127.0.0.1", static_dir, log_path, report_dir;
  int port = 8080;
  auto *serve = app.add_subcommand("serve", "Serve the interactive session API over HTTP")->fallthrough();
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port; 0 picks a free port");
  serve->add_option("--static", static_dir, "Directory served under /ui");
  serve->add_option("--log", log_path, "Append-only session log (JSONL)");
  serve->add_option("--reports", report_dir, "Directory for reports of accepted queries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_failure("usage", 3, e.what());
  }

  if (synth->parsed()) {
    char *summary = nullptr;
    polir_status s = polir_synthesize(synth_dir.c_str(), synth_seed, &summary);
    if (s != POLIR_OK) return report_status(s);
    print_and_free(summary);
    return 0;
  }
  if (serve->parsed()) {
    Config config;
    polir_status s = make_config(flags, &config);
    if (s != POLIR_OK) return report_status(s);
    SessionHandle session;
    s = polir_session_open(config.get(), log_path.empty() ? nullptr : log_path.c_str(),
                           report_dir.empty() ? nullptr : report_dir.c_str(), session.out());
    if (s != POLIR_OK) return report_status(s);
    ServerHandle server;
    int bound = 0;
    s = polir_server_start(session.get(), host.c_str(), port, static_dir.empty() ? nullptr : static_dir.c_str(),
                           server.out(), &bound);
    if (s != POLIR_OK) return report_status(s);
    std::printf("{\"listening\":\"http://%s:%d\"}\n", host.c_str(), bound);
    std::fflush(stdout);
    s = polir_server_wait(server.get());
    return s == POLIR_OK ? 0 : report_status(s);
  }
  return run_stage(flags, selected);
}
