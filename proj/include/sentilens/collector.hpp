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

#ifndef SENTILENS_COLLECTOR_HPP
#define SENTILENS_COLLECTOR_HPP

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sentilens {

enum class SourceKind { kTwitterLike, kFacebookLike, kFile };

std::string_view to_string(SourceKind kind);
/// Accepts "twitter-like", "facebook-like" and "file".
SourceKind parse_source_kind(std::string_view text);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
};

/// A cursor-paginated JSON search endpoint. Requests are
/// `GET base_url?q=<query>&count=<page_size>[&cursor=<cursor>]`.
struct EndpointConfig {
  std::string base_url;
  std::string query;
  int page_size = 100;
  std::string cursor_field = "next_cursor";
  std::string records_field = "data";
  std::size_t max_records = 1000;
  std::optional<std::string> auth_token;
  /// Requests per minute; 0 disables spacing.
  int rate_limit = 0;
  SourceKind source = SourceKind::kTwitterLike;
  RetryPolicy retry;
};

/// Throws ConfigError when an invariant of EndpointConfig is violated.
void validate(const EndpointConfig& config);

struct RawRecord {
  SourceKind source = SourceKind::kFile;
  /// Compact JSON text of one object.
  std::string payload;
  std::chrono::system_clock::time_point fetched_at;
};

struct Page {
  std::vector<RawRecord> records;
  std::optional<std::string> next_cursor;
};

/// One GET. Throws NetworkError (retryable, attempts == 1) on transport
/// failure or 5xx, RateLimitError on 429 and ParseError on a malformed body.
Page fetch_page(const EndpointConfig& config,
                const std::optional<std::string>& cursor);

/// Injection points so tests can observe waits without sleeping.
struct CollectHooks {
  std::function<void(std::chrono::milliseconds)> sleep;
  std::function<std::chrono::steady_clock::time_point()> now;
};

/// Follows cursors until exhausted or `max_records` is reached. Retries each
/// page up to `retry.max_attempts` times with exponential backoff; a 429 waits
/// for its Retry-After instead when the header is present.
std::vector<RawRecord> collect(const EndpointConfig& config,
                               const CollectHooks& hooks = {});

enum class IngestFormat { kJsonLines, kJsonArray };
IngestFormat parse_ingest_format(std::string_view text);

struct IngestResult {
  std::vector<RawRecord> records;
  std::size_t skipped = 0;
};

/// Reads an offline dump. In strict mode the first bad line throws a
/// DataError carrying its 1-based line number; otherwise it is skipped and
/// counted. Blank lines are ignored in either mode.
IngestResult ingest_file(const std::filesystem::path& path, IngestFormat format,
                         bool strict = false);

/// One payload per line, LF terminated.
void write_raw_jsonl(const std::filesystem::path& path,
                     const std::vector<RawRecord>& records);

}  // namespace sentilens

#endif  // SENTILENS_COLLECTOR_HPP
