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

#pragma once

// Plain comma-separated tables with a header row.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "revival/analysis.hpp"

namespace revival {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Column by header name; throws ConfigError if absent.
  const std::vector<double>& column(std::string_view name) const;
};

/// Shortest round-trip formatting, '\n' line ends, so equal tables give equal bytes.
std::string format_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Throws ConfigError on ragged rows or unparsable numbers, std::runtime_error on I/O.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Trace from two named columns; `time_scale` converts the time column to seconds.
SignalTrace trace_from_csv(const CsvTable& table, std::string_view time_column, std::string_view value_column,
                           double time_scale);

}  // namespace revival
