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

// Small file helpers shared by the stage readers and writers.

#ifndef POLIR_IO_H_
#define POLIR_IO_H_

#include <string>
#include <string_view>
#include <vector>

namespace polir::io {

// Throws Error(kMissingInput) when the file cannot be opened.
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);
bool exists(const std::string &path);
void ensure_dir(const std::string &path);
std::string join_path(const std::string &dir, const std::string &name);
std::string parent_dir(const std::string &path);

using CsvRow = std::vector<std::string>;

// RFC 4180 subset: comma separated, double-quote escaping, CRLF tolerated.
std::vector<CsvRow> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);
std::string csv_line(const CsvRow &row);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);
std::string lower(std::string_view s);

// Shortest decimal form that round-trips a double ("0.55", not
// "0.55000000000000004").
std::string format_real(double v);
// Fixed number of decimals.
std::string format_fixed(double v, int decimals);

// FNV-1a 64-bit, hex encoded. Used for artifact checksums.
std::string checksum(std::string_view data);

}  // namespace polir::io

#endif  // POLIR_IO_H_
