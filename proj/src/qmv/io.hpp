// Copyright 2026 The qmlverify Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qmv::io {

/// Writes to "<path>.tmp" and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// printf-style "%.<digits>g", locale independent for the C locale.
std::string format_g(double v, int digits);

/// Round-trip exact decimal form of a double.
inline std::string format_exact(double v) { return format_g(v, 17); }

/// Whole-token parses; return false on trailing garbage or overflow.
bool parse_double(std::string_view s, double& out);
bool parse_u64(std::string_view s, std::uint64_t& out);
bool parse_int(std::string_view s, int& out);

std::vector<std::string_view> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

}  // namespace qmv::io
