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

#ifndef SENTILENS_ERRORS_HPP
#define SENTILENS_ERRORS_HPP

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sentilens {

/// Base of every error the library throws. The CLI maps the concrete type to
/// an exit code (see `exit_code_for`).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or violated precondition on user input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent data: bad JSON, missing fields, misaligned ids.
class DataError : public Error {
 public:
  using Error::Error;
};

/// JSON that failed to parse; `byte_offset` is where the parser gave up.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : DataError(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A persisted artifact (model file) that is corrupt or of the wrong version.
class FormatError : public Error {
 public:
  using Error::Error;
};

class NetworkError : public Error {
 public:
  NetworkError(const std::string& what, int attempts, bool retryable)
      : Error(what), attempts_(attempts), retryable_(retryable) {}
  int attempts() const noexcept { return attempts_; }
  bool retryable() const noexcept { return retryable_; }

 private:
  int attempts_;
  bool retryable_;
};

/// HTTP 429. `retry_after` is absent when the server sent no usable header.
class RateLimitError : public NetworkError {
 public:
  RateLimitError(const std::string& what, int attempts,
                 std::optional<std::chrono::seconds> retry_after)
      : NetworkError(what, attempts, true), retry_after_(retry_after) {}
  std::optional<std::chrono::seconds> retry_after() const noexcept {
    return retry_after_;
  }

 private:
  std::optional<std::chrono::seconds> retry_after_;
};

}  // namespace sentilens

#endif  // SENTILENS_ERRORS_HPP
