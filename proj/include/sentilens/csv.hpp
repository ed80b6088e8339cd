// Copyright 2026 The SentiLens Authors.
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

#ifndef SENTILENS_CSV_HPP
#define SENTILENS_CSV_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sentilens::csv {

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string field(std::string_view value);

/// Shortest text that round-trips the double exactly.
std::string number(double value);

/// Joins already-escaped fields.
std::string row(const std::vector<std::string>& fields);

/// RFC 4180 reader. Throws IoError if the file cannot be opened and
/// DataError on an unterminated quote.
std::vector<std::vector<std::string>> read(const std::filesystem::path& path);

}  // namespace sentilens::csv

#endif  // SENTILENS_CSV_HPP
