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

// Signal analysis: the spectral recipe for photon-number extraction, parity,
// Wigner values by displaced parity and cat size from fringe periods.

#include <span>
#include <vector>

#include "revival/types.hpp"

namespace revival {

/// Real samples against time (s). Times strictly increasing, values finite.
struct SignalTrace {
  std::vector<double> times;
  std::vector<double> values;

  void validate() const;
  std::size_t size() const { return times.size(); }
};

/// Magnitude of a transform on a uniform frequency grid (Hz).
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<double> magnitudes;
};

struct PreprocessOptions {
  double step = us(0.1);
  double half_span = us(3000.0);
};

/// Linear interpolation onto a uniform grid starting at t = 0 (values before the
/// first sample are held), mean removal, even extension about t = 0 and zero
/// padding to +-half_span. Throws EmptyTrace below two samples.
SignalTrace preprocess(const SignalTrace& trace, const PreprocessOptions& options = {});

/// |DFT| (rectangular window) of a uniformly sampled trace, bins 0 .. L/2.
/// Throws NonUniformGrid if the sampling is not uniform.
Spectrum dft_spectrum(const SignalTrace& trace);

struct PeakRecord {
  int n;
  double expected_center;  // Hz
  double center;           // Hz, fitted
  double amplitude;        // fitted height
};

struct PeakFitOptions {
  double f_min = 30e3;   // Hz
  double f_max = 250e3;  // Hz
  /// Highest photon number in the model; negative selects the largest n whose
  /// expected peak lies inside the window.
  int n_max = -1;
  /// Fit a constant floor under the peaks.
  bool fit_floor = false;
};

struct PhotonExtraction {
  RVector p;  // p(n) = A_n / sum A
  std::vector<PeakRecord> peaks;
  double width = 0.0;     // shared Gaussian sigma (Hz)
  double baseline = 0.0;  // fitted constant floor
  double residual_rms = 0.0;
  bool overlapping = false;  // some adjacent expected spacing is below the width
  bool converged = false;
};

/// Least-squares fit of c + sum_n A_n exp(-(f - f_n)^2 / 2 s^2) with f_n initialized
/// at omega0 sqrt(n + 1) / 2 pi and a shared width. The floor c is zero unless
/// options.fit_floor is set. Throws FitDiverged.
PhotonExtraction extract_photon_distribution(const Spectrum& spectrum, double omega0,
                                             const PeakFitOptions& options = {});

/// sum (-1)^n p(n), clamped to [-1, 1].
double parity_of(std::span<const double> p);
double parity_of(const RVector& p);

/// (2/pi) Tr[rho D(alpha) P D(-alpha)] on the exact (untruncated) displacement
/// of the given truncated state. Throws TruncationTooSmall if rho has
/// population above 1e-8 in its top Fock level.
double wigner_point(const CMatrix& field_rho, Complex alpha, double* imag_residual = nullptr);

struct FringeFit {
  double d2;  // (pi / period)^2
  double period;
  double amplitude;  // >= 0
  double phase;      // rad
  double offset;
  double residual_rms;
};

struct FringeFitOptions {
  double window = 1.2;  // fit only |alpha| <= window
  double min_periods = 3.0;
};

/// Fits offset + amplitude cos(2 pi alpha / period + phase) and returns the cat size.
/// Throws InsufficientFringes for flat data or fewer than min_periods fringes
/// inside the window, FitDiverged if the refinement fails.
FringeFit cat_size_from_fringes(std::span<const double> alpha, std::span<const double> p_g,
                                const FringeFitOptions& options = {});

}  // namespace revival
