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

// Shared helpers for the unit tests: scratch directories, a seeded
// generator for property tests and error-code assertions.

#ifndef POLIR_TESTS_TEST_UTIL_H_
#define POLIR_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "polir/error.h"

namespace polir::testing {

// Fresh empty directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string &tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("polir_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  std::string path() const { return path_.string(); }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Seeded generator for hand-rolled property tests.
class Gen {
 public:
  explicit Gen(uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

  std::string word(int min_len, int max_len, const std::string &alphabet = "abcdefghijklmnopqrstuvwxyz") {
    int n = integer(min_len, max_len);
    std::string w;
    for (int i = 0; i < n; ++i) w.push_back(alphabet[integer(0, static_cast<int>(alphabet.size()) - 1)]);
    return w;
  }

  template <typename T>
  const T &pick(const std::vector<T> &v) {
    return v[static_cast<size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

  std::vector<double> vec(int dim, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(dim);
    for (auto &x : v) x = real(lo, hi);
    return v;
  }

  std::mt19937_64 &engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

template <typename Fn>
ErrorCode error_code_of(Fn &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected polir::Error");
  return ErrorCode::kInternal;
}

}  // namespace polir::testing

#define CHECK_ERROR_CODE(expr, code) \
  CHECK(::polir::testing::error_code_of([&] { (void)(expr); }) == (code))

#endif  // POLIR_TESTS_TEST_UTIL_H_
