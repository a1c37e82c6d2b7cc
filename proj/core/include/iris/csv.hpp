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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iris::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the row starts
  std::vector<std::string> fields;
};

// RFC 4180 style: comma separated, '"' quoting with "" escapes, quoted
// fields may span lines, CRLF accepted. Blank lines are skipped.
std::vector<Row> Parse(std::string_view text, const std::string& source_name = {});
std::vector<Row> ReadFile(const std::filesystem::path& path);

// Header-addressed view over parsed rows. Header names are matched exactly
// after trimming surrounding whitespace.
class Table {
 public:
  Table(std::vector<Row> rows, std::string source_name);
  static Table FromFile(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  std::size_t header_line() const { return header_line_; }
  const std::vector<Row>& rows() const { return rows_; }

  std::optional<std::size_t> Column(std::string_view name) const;
  // Throws ValidationError naming the missing column.
  std::size_t RequireColumn(std::string_view name) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::size_t header_line_ = 0;
  std::vector<Row> rows_;
};

// Quotes a field only when needed.
std::string Escape(std::string_view field);
void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

std::string Trim(std::string_view s);

// Strict numeric parsing of a whole (trimmed) field.
std::optional<double> ParseDouble(std::string_view s);
std::optional<long long> ParseInt(std::string_view s);

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double v);

}  // namespace iris::csv
