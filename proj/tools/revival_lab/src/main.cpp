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

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "revival/errors.hpp"
#include "scenarios.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::string scenario_list() {
  std::string s;
  for (auto n : revival::cli::kScenarioNames) s += (s.empty() ? "" : " | ") + std::string(n);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-QED collapse/revival and cat-state simulations"};
  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  app.add_option("scenario", scenario, scenario_list())->required();
  app.add_option("--config", config_path, "scenario INI file")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--seed", seed, "RNG seed for synthetic data");
  app.add_option("--tol", tol, "integrator tolerance (overrides the config)");
  app.footer("Threads: REVIVAL_LAB_THREADS. Exit status: 0 ok, 1 numeric or I/O failure, 2 usage or config error.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  if (!revival::cli::is_scenario(scenario)) {
    std::cerr << fmt::format("usage error: unknown scenario '{}' (expected {})\n", scenario, scenario_list());
    return kUsage;
  }

  try {
    revival::cli::ScenarioConfig config = revival::cli::load_config(config_path);
    if (tol) {
      config.physics.tol = *tol;
      config.physics.validate();
    }
    const revival::cli::RunOptions options{out_dir, seed, tol};
    const auto result = revival::cli::compute_scenario(scenario, config, seed);
    for (const auto& p : revival::cli::write_scenario(scenario, result, config, options)) {
      std::cout << p.string() << "\n";
    }
  } catch (const revival::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const revival::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const revival::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kFailure;
  } catch (const revival::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
