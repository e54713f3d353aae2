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

// Extraction of the instrument parameters from a vacuum Rabi trace, and
// synthetic traces for checking the extraction.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "revival/analysis.hpp"
#include "revival/sequence.hpp"

namespace revival {

/// The seven fitted quantities. x0 is signed as in ExperimentConfig.
struct VacuumRabiParams {
  double omega0 = khz_to_rad_per_s(49.88);
  double x0 = mm(-1.72);
  double p1 = 0.094;
  double a = 1.0;
  double b = 0.133;
  double c = 0.297;
  double d = 1.136;

  static constexpr std::size_t kCount = 7;
  static constexpr std::array<std::string_view, kCount> kNames{"omega0", "x0", "p1", "a", "b", "c", "d"};

  std::array<double, kCount> to_array() const { return {omega0, x0, p1, a, b, c, d}; }
  static VacuumRabiParams from_array(const std::array<double, kCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
  Homography homography() const { return {a, b, c, d}; }
};

/// Inputs held fixed during the fit.
struct FitFixed {
  double v = 8.1;      // m/s
  double w = mm(6.0);  // m
};

/// homography((1 - p1) sin^2(omega0 t_e / 2) + p1 sin^2(sqrt(2) omega0 t_e / 2)),
/// t_e = effective_time(t_i).
double model_pg(double t_i, const VacuumRabiParams& params, const FitFixed& fixed);

struct FitResult {
  VacuumRabiParams params;
  std::array<double, VacuumRabiParams::kCount> uncertainties{};  // 1 sigma, 0 for a (fixed)
  double residual_rms = 0.0;
  bool converged = false;
  std::size_t starts = 0;
};

struct FitOptions {
  int omega_starts = 9;  // grid over +-10% of the dominant DFT line
  std::array<double, 5> x0_starts_mm{-3.0, -1.5, 0.0, 1.5, 3.0};
  std::size_t simplex_iterations = 1500;
  std::size_t polished_starts = 4;
};

/// Least-squares fit of model_pg to (t_i, P_g) samples with a = 1. The trace
/// need not be time ordered. Throws DomainError for fewer than 50 samples or
/// fewer than 10 Rabi periods.
FitResult fit_vacuum_rabi(const SignalTrace& data, const FitFixed& fixed, const FitOptions& options = {});

/// Standard deviations over `resamples` residual-bootstrap refits.
std::array<double, VacuumRabiParams::kCount> bootstrap_uncertainty(const SignalTrace& data, const FitResult& fit,
                                                                   const FitFixed& fixed, int resamples,
                                                                   std::uint64_t seed);

enum class NoiseModel { kGaussian, kBinomial };

struct SyntheticOptions {
  NoiseModel noise = NoiseModel::kGaussian;
  int shots = 400;  // binomial only
};

/// model_pg on the grid plus seeded noise, clipped to [0, 1]. For binomial
/// noise `noise_sigma` is ignored and each point is a sample frequency over `shots`.
SignalTrace generate_synthetic(const VacuumRabiParams& params, const FitFixed& fixed, double noise_sigma,
                               std::span<const double> t_grid, std::uint64_t seed, const SyntheticOptions& options = {});

}  // namespace revival
