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

#include <algorithm>
#include <cmath>

#include "least_squares.hpp"
#include "revival/analysis.hpp"
#include "revival/errors.hpp"

namespace revival {

namespace {

// Half-maximum width of the peak nearest f, in bins, as a starting sigma.
double initial_sigma(const std::vector<double>& mag, std::size_t peak) {
  const double half = 0.5 * mag[peak];
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && mag[lo] > half) --lo;
  while (hi + 1 < mag.size() && mag[hi] > half) ++hi;
  return std::max(1.0, static_cast<double>(hi - lo) / 2.3548);
}

}  // namespace

PhotonExtraction extract_photon_distribution(const Spectrum& spectrum, double omega0, const PeakFitOptions& options) {
  if (!(omega0 > 0.0)) throw DomainError("extract_photon_distribution needs omega0 > 0");
  if (spectrum.frequencies.size() != spectrum.magnitudes.size() || spectrum.frequencies.size() < 2) {
    throw EmptyTrace("spectrum is empty");
  }
  const double f0 = omega0 / kTwoPi;
  if (f0 < options.f_min || f0 > options.f_max) throw DomainError("vacuum Rabi peak lies outside the fit window");

  int n_max = options.n_max;
  if (n_max < 0) n_max = static_cast<int>(std::floor(std::pow(options.f_max / f0, 2) - 1.0 + 1e-12));
  const double nyquist = spectrum.frequencies.back();
  if (f0 * std::sqrt(n_max + 1.0) >= nyquist) throw DomainError("n_max maps beyond the Nyquist frequency");
  const int peaks = n_max + 1;

  // Work in kHz with magnitudes scaled to unit maximum.
  std::vector<double> freq, mag;
  for (std::size_t k = 0; k < spectrum.frequencies.size(); ++k) {
    const double f = spectrum.frequencies[k];
    if (f >= options.f_min && f <= options.f_max) {
      freq.push_back(f * 1e-3);
      mag.push_back(spectrum.magnitudes[k]);
    }
  }
  const std::size_t m = freq.size();
  if (m < static_cast<std::size_t>(2 * peaks + 1)) throw EmptyTrace("too few spectral bins inside the fit window");
  const double scale = *std::max_element(mag.begin(), mag.end());
  if (!(scale > 0.0)) throw FitDiverged("spectrum is identically zero in the fit window");
  for (double& y : mag) y /= scale;
  const double df = freq[1] - freq[0];

  std::vector<double> expected(peaks), bound(peaks);
  for (int n = 0; n < peaks; ++n) expected[n] = f0 * 1e-3 * std::sqrt(n + 1.0);
  for (int n = 0; n < peaks; ++n) {
    double gap = std::numeric_limits<double>::infinity();
    if (n > 0) gap = std::min(gap, expected[n] - expected[n - 1]);
    if (n + 1 < peaks) gap = std::min(gap, expected[n + 1] - expected[n]);
    if (!std::isfinite(gap)) gap = expected[n];
    bound[n] = 0.45 * gap;
  }

  const auto nearest_bin = [&](double f) {
    const auto it = std::lower_bound(freq.begin(), freq.end(), f);
    std::size_t k = static_cast<std::size_t>(it - freq.begin());
    if (k >= m) k = m - 1;
    if (k > 0 && std::abs(freq[k - 1] - f) < std::abs(freq[k] - f)) --k;
    return k;
  };

  // Parameters: theta_n (A_n = theta_n^2), u_n (center offset bound[n] tanh u_n),
  // log sigma, and a constant floor for the leakage background of |DFT|.
  const std::size_t p = static_cast<std::size_t>(2 * peaks + (options.fit_floor ? 2 : 1));
  const std::size_t ls = static_cast<std::size_t>(2 * peaks), floor_idx = ls + 1;
  std::vector<double> x0(p, 0.0);
  std::size_t strongest = nearest_bin(expected[0]);
  for (int n = 0; n < peaks; ++n) {
    const std::size_t k = nearest_bin(expected[n]);
    x0[n] = std::sqrt(std::max(mag[k], 1e-6));
    if (mag[k] > mag[strongest]) strongest = k;
  }
  x0[ls] = std::log(initial_sigma(mag, strongest) * df);

  const auto model = [&](const double* q, double* r) {
    const double sigma = std::exp(q[ls]);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    const double floor = options.fit_floor ? q[floor_idx] : 0.0;
    for (std::size_t j = 0; j < m; ++j) r[j] = floor - mag[j];
    for (int n = 0; n < peaks; ++n) {
      const double amp = q[n] * q[n];
      const double center = expected[n] + bound[n] * std::tanh(q[peaks + n]);
      // Gaussian tails beyond 8 sigma are below double resolution relative to the peak.
      const double reach = 8.0 * sigma;
      auto j = static_cast<std::size_t>(std::lower_bound(freq.begin(), freq.end(), center - reach) - freq.begin());
      for (; j < m && freq[j] <= center + reach; ++j) {
        const double d = freq[j] - center;
        r[j] += amp * std::exp(-d * d * inv);
      }
    }
  };
  const auto jacobian = [&](const double* q, double* jac) {
    const double sigma = std::exp(q[ls]);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    std::fill(jac, jac + m * p, 0.0);
    if (options.fit_floor) {
      for (std::size_t j = 0; j < m; ++j) jac[j * p + floor_idx] = 1.0;
    }
    for (int n = 0; n < peaks; ++n) {
      const double amp = q[n] * q[n];
      const double t = std::tanh(q[peaks + n]);
      const double center = expected[n] + bound[n] * t;
      const double dcenter = bound[n] * (1.0 - t * t);
      const double reach = 8.0 * sigma;
      auto j = static_cast<std::size_t>(std::lower_bound(freq.begin(), freq.end(), center - reach) - freq.begin());
      for (; j < m && freq[j] <= center + reach; ++j) {
        const double d = freq[j] - center;
        const double g = std::exp(-d * d * inv);
        double* row = jac + j * p;
        row[n] = 2.0 * q[n] * g;
        row[peaks + n] = amp * g * d / (sigma * sigma) * dcenter;
        row[ls] += amp * g * d * d / (sigma * sigma);
      }
    }
  };

  detail::LsqOptions lsq;
  lsq.max_iter = 2000;
  lsq.normal_equations = true;
  const detail::LsqResult fit = detail::levenberg_marquardt(m, p, model, x0, lsq, jacobian);
  if (!std::isfinite(fit.chi2)) throw FitDiverged("peak fit produced a non-finite residual");

  PhotonExtraction out;
  out.converged = fit.converged;
  out.width = std::exp(fit.x[ls]) * 1e3;
  out.baseline = options.fit_floor ? fit.x[floor_idx] * scale : 0.0;
  out.residual_rms = std::sqrt(fit.chi2 / static_cast<double>(m)) * scale;
  out.p.resize(peaks);
  double total = 0.0;
  for (int n = 0; n < peaks; ++n) {
    const double amp = fit.x[n] * fit.x[n];
    out.p(n) = amp;
    total += amp;
    out.peaks.push_back({n, expected[n] * 1e3, (expected[n] + bound[n] * std::tanh(fit.x[peaks + n])) * 1e3, amp * scale});
  }
  if (!(total > 0.0)) throw FitDiverged("peak fit collapsed to zero amplitude");
  out.p /= total;
  for (int n = 0; n + 1 < peaks; ++n) {
    if ((expected[n + 1] - expected[n]) * 1e3 < out.width) out.overlapping = true;
  }
  return out;
}

}  // namespace revival
