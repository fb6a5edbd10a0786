// Copyright 2026 The typoclust Authors.
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

#ifndef TYPOCLUST_UTIL_HPP_
#define TYPOCLUST_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace typoclust {

std::string read_file(const std::filesystem::path& path);

// Writes atomically enough for our purposes: truncates and rewrites.
void write_file(const std::filesystem::path& path, std::string_view content);

// ASCII lowercase; bytes >= 0x80 pass through untouched.
std::string ascii_lower(std::string_view text);

std::string trim(std::string_view text);

// Splits on '\n', dropping a trailing '\r' from each line. A final empty line
// produced by a terminating newline is not returned.
std::vector<std::string> split_lines(std::string_view text);

// "%.<decimals>f" formatting, locale independent.
std::string format_fixed(double value, int decimals);

namespace csv {

// Quotes a field when it contains a comma, a quote or a line break.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

// RFC 4180 records. Empty lines are skipped.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace csv

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

// Per-stage seed: mixes a base seed with a stage name.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

}  // namespace typoclust

#endif  // TYPOCLUST_UTIL_HPP_
