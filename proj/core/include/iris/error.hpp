/*
 * Copyright 2026 The IRIS Fairness Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iris {

// Input that violates a documented schema, range or registry constraint.
// Carries the file and 1-based line when the input came from a file.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& message)
      : std::runtime_error(message), message_(message) {}
  ValidationError(std::string file, std::size_t line, const std::string& message)
      : std::runtime_error(Compose(file, line, message)),
        file_(std::move(file)),
        line_(line),
        message_(message) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  // The violated constraint without the location prefix.
  const std::string& constraint() const { return message_; }

 private:
  static std::string Compose(const std::string& file, std::size_t line,
                             const std::string& message) {
    std::string out = file.empty() ? std::string("<input>") : file;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + message;
  }

  std::string file_;
  std::size_t line_ = 0;
  std::string message_;
};

// A computation that cannot produce a defined value from otherwise valid
// inputs (empty groups, zero variance, missing dimensions, I/O failures).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace iris
