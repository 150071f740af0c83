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

#ifndef POLIR_ERROR_H_
#define POLIR_ERROR_H_

#include <stdexcept>
#include <string>

namespace polir {

// Error categories shared by every module. The numeric values are the ones
// exported through the C API (see polir.h).
enum class ErrorCode {
  kInternal = 1,
  kMissingInput = 2,
  kValidation = 3,
  kParse = 4,
  kConfig = 5,
  kConflict = 6,
  kNotFound = 7,
  kIngestion = 8,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace polir

#endif  // POLIR_ERROR_H_
