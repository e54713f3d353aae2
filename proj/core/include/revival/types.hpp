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

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace revival {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Fock truncation used throughout unless a caller asks for more.
inline constexpr int kDefaultDim = 50;

// Interface units (μs, kHz, mm) to SI.
constexpr double us(double v) { return v * 1e-6; }
constexpr double mm(double v) { return v * 1e-3; }
constexpr double khz_to_rad_per_s(double f_khz) { return kTwoPi * f_khz * 1e3; }
constexpr double to_us(double seconds) { return seconds * 1e6; }

}  // namespace revival
