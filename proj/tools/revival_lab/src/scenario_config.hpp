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

// Scenario files: an INI tree with [physics], [detection], [sequence], [fit]
// and [custom] sections. Interface units are us, kHz and mm.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "revival/sequence.hpp"

namespace revival::cli {

struct SequenceSettings {
  double nbar = 13.2;
  std::optional<double> t_beta_us;  // used when nbar is absent
  double t_i_us = 60.0;
  double t_d_us = 6.0;
  double alpha = -0.6;
  double probe_te_us = 68.5;
  std::vector<double> delays_us{6.0, 86.0, 146.0, 206.0};
  double te_step_us = 0.25;
  double vacuum_te_max_us = 400.0;
  double revival_te_max_us = 300.0;
  double alpha_min = -1.2;
  double alpha_max = 1.2;
  double alpha_step = 0.05;
  int alpha_dim = 64;
  double decay_window_lo_us = 50.0;
  double decay_window_hi_us = 90.0;
};

struct FitSettings {
  std::filesystem::path data;  // empty: synthetic
  double noise_sigma = 0.02;
  double t_max_us = 400.0;
  int points = 801;
};

struct CustomSettings {
  std::vector<SequenceStep> steps;
  double te_max_us = 300.0;
};

struct ScenarioConfig {
  ExperimentConfig physics;
  SequenceSettings sequence;
  FitSettings fit;
  CustomSettings custom;
  std::string text;  // file contents, hashed into .meta

  /// Amplitude of the first injection.
  double injection_beta() const;
  CatProtocol cat_protocol() const;
};

/// Throws ConfigError on malformed input; missing keys keep their defaults.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
ScenarioConfig load_config(const std::filesystem::path& path);

/// "inject:<us>:<phase>; resonant:<us>; wait:<us>; reset; measure".
std::vector<SequenceStep> parse_steps(const std::string& text);

}  // namespace revival::cli
