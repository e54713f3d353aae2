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

#include "revival/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "least_squares.hpp"
#include "revival/errors.hpp"

namespace revival {

void SignalTrace::validate() const {
  if (times.size() != values.size()) throw DomainError("trace times and values differ in length");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || !std::isfinite(values[k])) throw DomainError("trace holds non-finite samples");
    if (k > 0 && !(times[k] > times[k - 1])) throw DomainError("trace times must be strictly increasing");
  }
}

SignalTrace preprocess(const SignalTrace& trace, const PreprocessOptions& options) {
  if (trace.size() < 2) throw EmptyTrace("preprocess needs at least two samples");
  trace.validate();
  if (!(options.step > 0.0) || !(options.half_span > options.step)) throw DomainError("bad preprocessing grid");
  if (trace.times.front() < 0.0) throw DomainError("preprocess expects non-negative times");

  const long half = std::lround(options.half_span / options.step);
  const long last = static_cast<long>(std::floor(trace.times.back() / options.step + 1e-9));
  if (last > half) throw DomainError("trace is longer than the padded span");

  std::vector<double> grid(static_cast<std::size_t>(last) + 1);
  std::size_t j = 0;
  for (long k = 0; k <= last; ++k) {
    const double t = static_cast<double>(k) * options.step;
    while (j + 1 < trace.size() && trace.times[j + 1] < t) ++j;
    double value;
    if (t <= trace.times.front()) {
      value = trace.values.front();
    } else if (j + 1 >= trace.size()) {
      value = trace.values.back();
    } else {
      const double t0 = trace.times[j], t1 = trace.times[j + 1];
      const double u = (t - t0) / (t1 - t0);
      value = (1.0 - u) * trace.values[j] + u * trace.values[j + 1];
    }
    grid[static_cast<std::size_t>(k)] = value;
  }
  const double mean = std::accumulate(grid.begin(), grid.end(), 0.0) / static_cast<double>(grid.size());

  SignalTrace out;
  const std::size_t length = static_cast<std::size_t>(2 * half + 1);
  out.times.resize(length);
  out.values.assign(length, 0.0);
  for (long k = -half; k <= half; ++k) {
    const auto idx = static_cast<std::size_t>(k + half);
    out.times[idx] = static_cast<double>(k) * options.step;
    const long a = std::labs(k);
    if (a <= last) out.values[idx] = grid[static_cast<std::size_t>(a)] - mean;
  }
  return out;
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Spectrum dft_spectrum(const SignalTrace& trace) {
  if (trace.size() < 2) throw EmptyTrace("dft_spectrum needs at least two samples");
  trace.validate();
  const std::size_t length = trace.size();
  const double dt = (trace.times.back() - trace.times.front()) / static_cast<double>(length - 1);
  for (std::size_t k = 1; k < length; ++k) {
    if (std::abs(trace.times[k] - trace.times[k - 1] - dt) > 1e-6 * dt) {
      throw NonUniformGrid("dft_spectrum needs uniformly spaced samples");
    }
  }

  const std::size_t bins = length / 2 + 1;
  std::vector<double> in(trace.values);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(length), in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);

  Spectrum spectrum;
  spectrum.frequencies.resize(bins);
  spectrum.magnitudes.resize(bins);
  const double df = 1.0 / (static_cast<double>(length) * dt);
  for (std::size_t k = 0; k < bins; ++k) {
    spectrum.frequencies[k] = static_cast<double>(k) * df;
    spectrum.magnitudes[k] = std::hypot(out[k][0], out[k][1]);
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return spectrum;
}

double parity_of(std::span<const double> p) {
  double s = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) s += (n % 2 == 0 ? 1.0 : -1.0) * p[n];
  return std::clamp(s, -1.0, 1.0);
}

double parity_of(const RVector& p) { return parity_of(std::span<const double>(p.data(), static_cast<std::size_t>(p.size()))); }

double wigner_point(const CMatrix& field_rho, Complex alpha, double* imag_residual) {
  const int dim = static_cast<int>(field_rho.rows());
  if (dim < 1 || field_rho.cols() != dim) throw DomainError("wigner_point needs a square field matrix");
  if (std::abs(field_rho(dim - 1, dim - 1)) >= 1e-8) {
    throw TruncationTooSmall("state populates the top Fock level; increase dim");
  }

  // D(alpha) P D(-alpha) = D(2 alpha) P, so only <m|D(gamma)|n> is needed:
  // sqrt(n!/m!) gamma^(m-n) e^{-x/2} L_n^(m-n)(x) for m >= n, x = |gamma|^2.
  const Complex gamma = 2.0 * alpha;
  const double x = std::norm(gamma);
  Complex total = 0.0;
  if (x == 0.0) {
    for (int n = 0; n < dim; ++n) total += (n % 2 == 0 ? 1.0 : -1.0) * field_rho(n, n);
  } else {
    const double log_r = 0.5 * std::log(x);
    const Complex unit = gamma / std::sqrt(x);
    std::vector<double> lag(dim);
    std::vector<double> log_fact(dim);
    for (int n = 0; n < dim; ++n) log_fact[n] = std::lgamma(n + 1.0);
    for (int k = 0; k < dim; ++k) {
      const int count = dim - k;
      lag[0] = 1.0;
      if (count > 1) lag[1] = 1.0 + k - x;
      for (int j = 1; j + 1 < count; ++j) {
        lag[j + 1] = ((2.0 * j + 1.0 + k - x) * lag[j] - (j + k) * lag[j - 1]) / (j + 1.0);
      }
      const Complex up = std::pow(unit, k);              // phase of gamma^k
      const Complex down = std::pow(-std::conj(unit), k);  // phase of (-gamma^*)^k
      for (int j = 0; j < count; ++j) {
        // j is the lower index, j + k the upper one.
        const double mag = std::exp(0.5 * (log_fact[j] - log_fact[j + k]) + k * log_r - 0.5 * x) * lag[j];
        // <j+k|D|j>: rho(j, j+k) (-1)^j
        total += field_rho(j, j + k) * (j % 2 == 0 ? 1.0 : -1.0) * (mag * up);
        if (k > 0) {
          // <j|D|j+k>: rho(j+k, j) (-1)^(j+k)
          total += field_rho(j + k, j) * ((j + k) % 2 == 0 ? 1.0 : -1.0) * (mag * down);
        }
      }
    }
  }
  total *= 2.0 / kPi;
  if (imag_residual) *imag_residual = std::abs(total.imag());
  return total.real();
}

FringeFit cat_size_from_fringes(std::span<const double> alpha, std::span<const double> p_g,
                                const FringeFitOptions& options) {
  if (alpha.size() != p_g.size()) throw DomainError("fringe fit: alpha and P_g differ in length");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (std::abs(alpha[k]) <= options.window + 1e-12) {
      xs.push_back(alpha[k]);
      ys.push_back(p_g[k]);
    }
  }
  if (xs.size() < 6) throw InsufficientFringes("fringe fit: fewer than six samples inside the window");
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double span = *hi_it - *lo_it;
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double spread = 0.0;
  for (double y : ys) spread = std::max(spread, std::abs(y - mean));
  if (!(spread > 1e-9)) throw InsufficientFringes("fringe fit: flat curve");

  std::vector<double> sorted(xs);
  std::sort(sorted.begin(), sorted.end());
  double min_gap = span;
  for (std::size_t k = 1; k < sorted.size(); ++k) min_gap = std::min(min_gap, sorted[k] - sorted[k - 1]);
  const double shortest = std::max(2.0 * min_gap, 1e-6);

  // Coarse scan of the period with the linear parameters solved exactly.
  const std::size_t m = xs.size();
  double best_rss = std::numeric_limits<double>::infinity();
  double best_period = span;
  const int scan = 4000;
  for (int s = 0; s <= scan; ++s) {
    const double period = shortest * std::pow(span / shortest, static_cast<double>(s) / scan);
    Eigen::MatrixXd design(m, 3);
    Eigen::VectorXd target(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double phase = kTwoPi * xs[k] / period;
      design(k, 0) = 1.0;
      design(k, 1) = std::cos(phase);
      design(k, 2) = std::sin(phase);
      target(k) = ys[k];
    }
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
    const double rss = (design * coef - target).squaredNorm();
    if (rss < best_rss) {
      best_rss = rss;
      best_period = period;
    }
  }

  // Joint refinement in (offset, A, B, 1/period).
  Eigen::MatrixXd design(m, 3);
  for (std::size_t k = 0; k < m; ++k) {
    const double phase = kTwoPi * xs[k] / best_period;
    design.row(k) << 1.0, std::cos(phase), std::sin(phase);
  }
  const Eigen::VectorXd coef =
      design.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(m)));
  const auto residuals = [&](const double* q, double* r) {
    for (std::size_t k = 0; k < m; ++k) {
      const double phase = kTwoPi * xs[k] * q[3];
      r[k] = q[0] + q[1] * std::cos(phase) + q[2] * std::sin(phase) - ys[k];
    }
  };
  const detail::LsqResult fit =
      detail::levenberg_marquardt(m, 4, residuals, {coef(0), coef(1), coef(2), 1.0 / best_period});
  if (!std::isfinite(fit.chi2) || !(fit.x[3] > 0.0)) throw FitDiverged("fringe fit did not converge");

  FringeFit out;
  out.period = 1.0 / fit.x[3];
  out.offset = fit.x[0];
  out.amplitude = std::hypot(fit.x[1], fit.x[2]);
  out.phase = std::atan2(-fit.x[2], fit.x[1]);
  out.d2 = std::pow(kPi / out.period, 2);
  out.residual_rms = std::sqrt(fit.chi2 / static_cast<double>(m));
  if (!(out.amplitude > 1e-9)) throw InsufficientFringes("fringe fit: zero amplitude");
  if (span / out.period < options.min_periods) {
    throw InsufficientFringes("fringe fit: fewer than the required fringe periods in the window");
  }
  return out;
}

}  // namespace revival
