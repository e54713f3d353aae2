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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revival/analysis.hpp"
#include "revival/csv_io.hpp"
#include "revival/sequence.hpp"
#include "scenario_config.hpp"
#include "svg_plot.hpp"

namespace revival::cli {

inline constexpr std::array<std::string_view, 9> kScenarioNames{"fig2a", "fig2b", "fig2c", "fig3a", "fig3b",
                                                                "fig3c", "fig4",  "fit",   "custom"};

bool is_scenario(std::string_view name);

/// Grid lo, lo + step, ... up to hi inclusive, in μs; returned in seconds.
std::vector<double> grid_us(double lo_us, double hi_us, double step_us);

struct RevivalAnalysis {
  Spectrum spectrum;
  PhotonExtraction extraction;
};

/// Paper preprocessing, DFT and Gaussian-peak extraction of a probe trace.
RevivalAnalysis analyze_revival(const ProbeSweep& sweep, double omega0);

/// sqrt(2) times the standard deviation of the samples.
double rms_contrast(std::span<const double> p_g);

/// -1/slope of a least-squares line through (t, ln contrast); same units as t.
double exponential_time_constant(std::span<const double> t, std::span<const double> contrast);

struct ScenarioResult {
  CsvTable table;
  PlotSpec plot;
  std::vector<std::pair<std::string, CsvTable>> extra_tables;  // written as <name>_<suffix>.csv
  std::vector<std::pair<std::string, std::string>> summary;    // appended to .meta
  std::string report;                                          // <name>_report.txt when non-empty
};

ScenarioResult compute_scenario(std::string_view name, const ScenarioConfig& config, std::uint64_t seed);

struct RunOptions {
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::optional<double> tol;
};

/// Writes <name>.csv, <name>.svg, <name>.meta and any extras. Returns the
/// paths written.
std::vector<std::filesystem::path> write_scenario(std::string_view name, const ScenarioResult& result,
                                                  const ScenarioConfig& config, const RunOptions& options);

std::string sha256_hex(std::string_view data);

}  // namespace revival::cli
