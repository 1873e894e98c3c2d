// Copyright 2026 the chaosbench authors
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
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chaosbench::io {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Parses a full field as a double; throws FormatError naming `where` on failure.
double parse_double(std::string_view field, std::string_view where);
long long parse_int(std::string_view field, std::string_view where);
std::uint64_t parse_u64(std::string_view field, std::string_view where);

std::vector<std::string_view> split_csv_line(std::string_view line);

/// Writes through a temporary sibling file and renames it into place, so readers
/// never observe a partially written file. Parent directories are created.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);

std::string read_text(const std::filesystem::path& path);

}  // namespace chaosbench::io
