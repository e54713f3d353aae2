// Copyright 2026 The revival-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "revival/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "revival/errors.hpp"

namespace revival {

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return columns[k];
  }
  throw ConfigError(fmt::format("CSV has no column '{}'", name));
}

std::string format_csv(const CsvTable& table) {
  if (table.header.size() != table.columns.size()) throw ConfigError("CSV header and column count differ");
  const std::size_t rows = table.rows();
  for (const auto& c : table.columns) {
    if (c.size() != rows) throw ConfigError("CSV columns differ in length");
  }
  fmt::memory_buffer buf;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    fmt::format_to(std::back_inserter(buf), "{}{}", k ? "," : "", table.header[k]);
  }
  buf.push_back('\n');
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      fmt::format_to(std::back_inserter(buf), "{}{}", k ? "," : "", table.columns[k][r]);
    }
    buf.push_back('\n');
  }
  return fmt::to_string(buf);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  const std::string text = format_csv(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line);
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(f);
      table.columns.resize(fields.size());
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ConfigError(fmt::format("CSV line {}: expected {} fields, got {}", line_no, table.header.size(), fields.size()));
    }
    for (std::size_t k = 0; k < fields.size(); ++k) {
      double v = 0.0;
      const auto f = fields[k];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ConfigError(fmt::format("CSV line {}: cannot parse '{}'", line_no, f));
      }
      table.columns[k].push_back(v);
    }
  }
  if (table.header.empty()) throw ConfigError("CSV has no header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

SignalTrace trace_from_csv(const CsvTable& table, std::string_view time_column, std::string_view value_column,
                           double time_scale) {
  SignalTrace trace;
  for (double t : table.column(time_column)) trace.times.push_back(t * time_scale);
  trace.values = table.column(value_column);
  return trace;
}

}  // namespace revival
