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

#include "revival/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "least_squares.hpp"
#include "revival/errors.hpp"

namespace revival {

namespace {

constexpr std::size_t kFree = 6;  // omega0, x0, p1, b, c, d

double ideal_vacuum_pg(double t_e, double omega0, double p1) {
  const double s0 = std::sin(0.5 * omega0 * t_e);
  const double s1 = std::sin(0.5 * std::sqrt(2.0) * omega0 * t_e);
  return (1.0 - p1) * s0 * s0 + p1 * s1 * s1;
}

double effective_time_fixed(double t_i, double x0, const FitFixed& fixed) {
  ExperimentConfig cfg;
  cfg.v = fixed.v;
  cfg.w = fixed.w;
  cfg.x0 = x0;
  return effective_time(t_i, cfg);
}

// Unvalidated model on the free parameters in physical units.
double raw_model(double t_i, const std::array<double, kFree>& th, const FitFixed& fixed) {
  const double t_e = effective_time_fixed(t_i, th[1], fixed);
  const double p = ideal_vacuum_pg(t_e, th[0], th[2]);
  return (p + th[3]) / (th[4] * p + th[5]);
}

// Optimizer coordinates: omega0 / scale, x0 in mm, p1 = sin^2(u), b, c, d.
struct Coordinates {
  double omega_scale;

  std::array<double, kFree> physical(const double* q) const {
    const double s = std::sin(q[2]);
    return {q[0] * omega_scale, q[1] * 1e-3, s * s, q[3], q[4], q[5]};
  }
  std::vector<double> internal(const std::array<double, kFree>& th) const {
    return {th[0] / omega_scale, th[1] * 1e3, std::asin(std::sqrt(std::clamp(th[2], 0.0, 1.0))), th[3], th[4], th[5]};
  }
};

struct Samples {
  std::vector<double> t;
  std::vector<double> y;
};

Samples sorted_samples(const SignalTrace& data) {
  if (data.times.size() != data.values.size()) throw DomainError("trace times and values differ in length");
  std::vector<std::size_t> order(data.times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return data.times[i] < data.times[j]; });
  Samples s;
  for (std::size_t k : order) {
    if (!std::isfinite(data.times[k]) || !std::isfinite(data.values[k])) throw DomainError("non-finite sample");
    s.t.push_back(data.times[k]);
    s.y.push_back(data.values[k]);
  }
  for (std::size_t k = 1; k < s.t.size(); ++k) {
    if (!(s.t[k] > s.t[k - 1])) throw DomainError("duplicate sample times");
  }
  return s;
}

double dominant_frequency(const Samples& s) {
  SignalTrace trace;
  trace.times = s.t;
  trace.values = s.y;
  const Spectrum spec = dft_spectrum(preprocess(trace));
  double best = 0.0, best_f = 0.0;
  for (std::size_t k = 0; k < spec.frequencies.size(); ++k) {
    const double f = spec.frequencies[k];
    if (f < 1e3) continue;
    if (spec.magnitudes[k] > best) {
      best = spec.magnitudes[k];
      best_f = f;
    }
  }
  if (!(best_f > 0.0)) throw FitDiverged("no oscillation found in the data");
  return best_f;
}

detail::ResidualFn residual_fn(const Samples& s, const Coordinates& coords, const FitFixed& fixed) {
  return [&s, coords, fixed](const double* q, double* r) {
    const auto th = coords.physical(q);
    for (std::size_t k = 0; k < s.t.size(); ++k) r[k] = raw_model(s.t[k], th, fixed) - s.y[k];
  };
}

double sum_squares(const detail::ResidualFn& fn, const double* q, std::size_t n, std::vector<double>& scratch) {
  scratch.resize(n);
  fn(q, scratch.data());
  double acc = 0.0;
  for (double r : scratch) acc += r * r;
  return acc;
}

// 1 sigma from s^2 (J^T J)^{-1} with J by central differences in physical units.
std::array<double, kFree> jacobian_sigmas(const Samples& s, const std::array<double, kFree>& th, double chi2,
                                          const FitFixed& fixed) {
  const std::size_t n = s.t.size();
  Eigen::MatrixXd jac(n, kFree);
  const std::array<double, kFree> scale{th[0], 1e-3, 1.0, 1.0, 1.0, 1.0};
  for (std::size_t j = 0; j < kFree; ++j) {
    const double h = 1e-6 * std::max(std::abs(th[j]), std::abs(scale[j]));
    auto up = th, down = th;
    up[j] += h;
    down[j] -= h;
    for (std::size_t k = 0; k < n; ++k) {
      jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          (raw_model(s.t[k], up, fixed) - raw_model(s.t[k], down, fixed)) / (2.0 * h);
    }
  }
  const double dof = static_cast<double>(n) - static_cast<double>(kFree);
  const Eigen::MatrixXd cov = (jac.transpose() * jac).completeOrthogonalDecomposition().pseudoInverse() * (chi2 / dof);
  std::array<double, kFree> out{};
  for (std::size_t j = 0; j < kFree; ++j) out[j] = std::sqrt(std::max(0.0, cov(j, j)));
  return out;
}

VacuumRabiParams to_params(const std::array<double, kFree>& th) {
  return {th[0], th[1], std::clamp(th[2], 0.0, 1.0), 1.0, th[3], th[4], th[5]};
}

}  // namespace

double model_pg(double t_i, const VacuumRabiParams& params, const FitFixed& fixed) {
  if (!(params.p1 >= 0.0 && params.p1 <= 1.0)) throw DomainError("p1 must lie in [0, 1]");
  const double t_e = effective_time_fixed(t_i, params.x0, fixed);
  return params.homography().apply(std::clamp(ideal_vacuum_pg(t_e, params.omega0, params.p1), 0.0, 1.0));
}

FitResult fit_vacuum_rabi(const SignalTrace& data, const FitFixed& fixed, const FitOptions& options) {
  const Samples s = sorted_samples(data);
  const std::size_t n = s.t.size();
  if (n < 50) throw DomainError("fit_vacuum_rabi needs at least 50 samples");
  const double f_peak = dominant_frequency(s);
  if ((s.t.back() - s.t.front()) * f_peak < 10.0) throw DomainError("fit_vacuum_rabi needs at least 10 Rabi periods");

  const double omega_peak = kTwoPi * f_peak;
  const Coordinates coords{omega_peak};
  const detail::ResidualFn residuals = residual_fn(s, coords, fixed);

  const auto [lo_it, hi_it] = std::minmax_element(s.y.begin(), s.y.end());
  const double span = std::max(*hi_it - *lo_it, 1e-3);
  const double d0 = 1.0 / span;
  const double b0 = *lo_it * d0;

  struct Candidate {
    std::vector<double> q;
    double chi2;
  };
  std::vector<Candidate> candidates;
  std::vector<double> scratch;
  const auto objective = [&](const double* q) { return sum_squares(residuals, q, n, scratch); };
  const std::vector<double> step{0.01, 0.5, 0.2, 0.02, 0.05, 0.05};

  const int m = std::max(1, options.omega_starts);
  for (int i = 0; i < m; ++i) {
    const double factor = m == 1 ? 1.0 : 0.9 + 0.2 * static_cast<double>(i) / (m - 1);
    for (double x0_mm : options.x0_starts_mm) {
      const std::array<double, kFree> start{omega_peak * factor, x0_mm * 1e-3, 0.05, b0, 0.0, d0};
      const detail::SimplexResult sr =
          detail::nelder_mead(kFree, objective, coords.internal(start), step, options.simplex_iterations, 1e-9);
      candidates.push_back({sr.x, sr.value});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) { return a.chi2 < b.chi2; });

  FitResult best;
  best.starts = candidates.size();
  double best_chi2 = std::numeric_limits<double>::infinity();
  std::vector<double> best_q;
  bool best_converged = false;
  const std::size_t polish = std::min(options.polished_starts, candidates.size());
  for (std::size_t k = 0; k < polish; ++k) {
    detail::LsqOptions lsq;
    lsq.max_iter = 1000;
    try {
      const detail::LsqResult r = detail::levenberg_marquardt(n, kFree, residuals, candidates[k].q, lsq);
      if (std::isfinite(r.chi2) && r.chi2 < best_chi2) {
        best_chi2 = r.chi2;
        best_q = r.x;
        best_converged = r.converged;
      }
    } catch (const FitDiverged&) {
      if (candidates[k].chi2 < best_chi2) {
        best_chi2 = candidates[k].chi2;
        best_q = candidates[k].q;
        best_converged = false;
      }
    }
  }
  if (best_q.empty()) {
    best_q = candidates.front().q;
    best_chi2 = candidates.front().chi2;
  }

  const auto th = coords.physical(best_q.data());
  best.params = to_params(th);
  best.residual_rms = std::sqrt(best_chi2 / static_cast<double>(n));
  best.converged = best_converged && std::isfinite(best_chi2);
  const auto sig = jacobian_sigmas(s, th, best_chi2, fixed);
  best.uncertainties = {sig[0], sig[1], sig[2], 0.0, sig[3], sig[4], sig[5]};
  return best;
}

std::array<double, VacuumRabiParams::kCount> bootstrap_uncertainty(const SignalTrace& data, const FitResult& fit,
                                                                   const FitFixed& fixed, int resamples,
                                                                   std::uint64_t seed) {
  if (resamples < 2) throw DomainError("bootstrap needs at least two resamples");
  const Samples s = sorted_samples(data);
  const std::size_t n = s.t.size();
  const auto& p = fit.params;
  // Refit in the a = 1 gauge.
  const std::array<double, kFree> th{p.omega0, p.x0, p.p1, p.b / p.a, p.c / p.a, p.d / p.a};
  std::vector<double> model(n), resid(n);
  for (std::size_t k = 0; k < n; ++k) {
    model[k] = raw_model(s.t[k], th, fixed);
    resid[k] = s.y[k] - model[k];
  }

  const Coordinates coords{p.omega0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::array<double, kFree>> draws;
  for (int r = 0; r < resamples; ++r) {
    Samples boot{s.t, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) boot.y[k] = model[k] + resid[pick(rng)];
    const detail::ResidualFn fn = residual_fn(boot, coords, fixed);
    const detail::LsqResult lr = detail::levenberg_marquardt(n, kFree, fn, coords.internal(th));
    draws.push_back(coords.physical(lr.x.data()));
  }
  std::array<double, kFree> sd{};
  for (std::size_t j = 0; j < kFree; ++j) {
    double mean = 0.0;
    for (const auto& d : draws) mean += d[j];
    mean /= static_cast<double>(draws.size());
    double var = 0.0;
    for (const auto& d : draws) var += (d[j] - mean) * (d[j] - mean);
    sd[j] = std::sqrt(var / static_cast<double>(draws.size() - 1));
  }
  return {sd[0], sd[1], sd[2], 0.0, sd[3], sd[4], sd[5]};
}

SignalTrace generate_synthetic(const VacuumRabiParams& params, const FitFixed& fixed, double noise_sigma,
                               std::span<const double> t_grid, std::uint64_t seed, const SyntheticOptions& options) {
  if (!(noise_sigma >= 0.0)) throw DomainError("noise sigma must be non-negative");
  if (options.noise == NoiseModel::kBinomial && options.shots < 1) throw DomainError("binomial noise needs shots >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SignalTrace out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.values.reserve(t_grid.size());
  for (double t : t_grid) {
    const double p = model_pg(t, params, fixed);
    double y = p;
    if (options.noise == NoiseModel::kGaussian) {
      if (noise_sigma > 0.0) y += noise_sigma * gauss(rng);
    } else {
      std::binomial_distribution<int> counts(options.shots, std::clamp(p, 0.0, 1.0));
      y = static_cast<double>(counts(rng)) / options.shots;
    }
    out.values.push_back(std::clamp(y, 0.0, 1.0));
  }
  return out;
}

}  // namespace revival
