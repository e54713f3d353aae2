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

#include "revival/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "revival/errors.hpp"
#include "revival/parallel.hpp"

namespace revival {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr double kSqrtPi = 1.7724538509055160273;

// Antiderivative of the mode profile along the atom clock.
double transit_integral(double t, const ExperimentConfig& cfg) {
  return 0.5 * kSqrtPi * (cfg.w / cfg.v) * std::erf((cfg.x0 + cfg.v * t) / cfg.w);
}

}  // namespace

void Homography::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
    throw DegenerateHomography("homography coefficients must be finite");
  }
  // The denominator is affine in P, so a sign check at both ends covers [0, 1].
  const double at0 = d;
  const double at1 = c + d;
  if (at0 == 0.0 || at1 == 0.0 || (at0 > 0.0) != (at1 > 0.0)) {
    throw DegenerateHomography("homography denominator vanishes on [0, 1]");
  }
  if (a * d - b * c == 0.0) throw DegenerateHomography("homography is constant (ad = bc)");
}

double Homography::apply(double p_ideal) const {
  validate();
  if (!(p_ideal >= 0.0 && p_ideal <= 1.0)) throw DomainError("probability must lie in [0, 1]");
  return (a * p_ideal + b) / (c * p_ideal + d);
}

double Homography::inverse(double p_measured) const {
  validate();
  const double den = a - c * p_measured;
  if (den == 0.0) throw DegenerateHomography("inverse homography is singular at this value");
  return (d * p_measured - b) / den;
}

void ExperimentConfig::validate() const {
  if (!(omega0 > 0.0)) throw ConfigError("omega0 must be positive");
  if (!(v > 0.0) || !(w > 0.0)) throw ConfigError("velocity and waist must be positive");
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  if (!(t_cav > 0.0)) throw ConfigError("t_cav must be positive");
  if (!(n_th >= 0.0)) throw ConfigError("n_th must be non-negative");
  if (!(t_atom > 0.0)) throw ConfigError("t_atom must be positive");
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ConfigError("p1 must lie in [0, 1]");
  if (dim < 2) throw ConfigError("dim must be at least 2");
  if (!(injection_rate > 0.0)) throw ConfigError("injection rate must be positive");
  if (!(injection_offset >= 0.0)) throw ConfigError("injection offset must be non-negative");
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  detection.validate();
}

JCParams ExperimentConfig::jc() const { return {omega0, 0.0, dim}; }

BathParams ExperimentConfig::bath() const { return {t_cav, n_th, t_atom}; }

double ExperimentConfig::envelope(double t) const {
  const double x = (x0 + v * t) / w;
  return std::exp(-x * x);
}

double effective_time(double t_i, const ExperimentConfig& cfg, double start) {
  if (!(t_i >= 0.0)) throw DomainError("interaction time must be non-negative");
  if (t_i == 0.0) return 0.0;
  const double t_e = transit_integral(start + t_i, cfg) - transit_integral(start, cfg);
  return std::clamp(t_e, 0.0, t_i);
}

double interaction_time_for(double t_e, const ExperimentConfig& cfg, double start) {
  if (!(t_e >= 0.0)) throw DomainError("effective time must be non-negative");
  if (t_e == 0.0) return 0.0;
  const double remaining = 0.5 * kSqrtPi * (cfg.w / cfg.v) - transit_integral(start, cfg);
  if (!(t_e < remaining)) throw DomainError("effective time exceeds the remaining transit");
  const auto f = [&](double t_i) { return effective_time(t_i, cfg, start) - t_e; };
  // t_e <= t_i always, so t_e brackets the root from below.
  double lo = t_e;
  if (f(lo) >= 0.0) return lo;
  double hi = 2.0 * t_e;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  std::uintmax_t iterations = 200;
  const auto [lo_t, hi_t] =
      boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iterations);
  return 0.5 * (lo_t + hi_t);
}

double injection_amplitude(double t_beta_us, const ExperimentConfig& cfg) {
  if (t_beta_us < cfg.injection_offset) {
    throw NegativeAmplitude("injection time " + std::to_string(t_beta_us) + " us is below the offset");
  }
  return cfg.injection_rate * (t_beta_us - cfg.injection_offset);
}

double injection_duration(double beta_abs, const ExperimentConfig& cfg) {
  if (!(beta_abs >= 0.0)) throw NegativeAmplitude("injection amplitude must be non-negative");
  return beta_abs / cfg.injection_rate + cfg.injection_offset;
}

double detection_homography(double p_ideal, const ExperimentConfig& cfg) { return cfg.detection.apply(p_ideal); }

double detection_homography_inverse(double p_measured, const ExperimentConfig& cfg) {
  return cfg.detection.inverse(p_measured);
}

step::Inject step::Inject::with_amplitude(Complex alpha, const ExperimentConfig& cfg) {
  return {injection_duration(std::abs(alpha), cfg), alpha == Complex(0.0) ? 0.0 : std::arg(alpha)};
}

void validate_steps(std::span<const SequenceStep> steps) {
  for (std::size_t k = 0; k < steps.size(); ++k) {
    std::visit(overloaded{
                   [](const step::Inject& s) {
                     if (!(s.duration_us >= 0.0)) throw DomainError("injection duration must be non-negative");
                   },
                   [](const step::Resonant& s) {
                     if (!(s.t_i >= 0.0)) throw DomainError("resonant duration must be non-negative");
                   },
                   [](const step::Wait& s) {
                     if (!(s.t_d >= 0.0)) throw DomainError("wait duration must be non-negative");
                   },
                   [](const step::ResetDiscardG&) {},
                   [&](const step::MeasurePg&) {
                     if (k + 1 != steps.size()) throw DomainError("measure_pg must be the final step");
                   },
               },
               steps[k]);
  }
}

namespace {

JointDensityMatrix initial_state(const ExperimentConfig& cfg) {
  Eigen::Matrix2cd excited = Eigen::Matrix2cd::Zero();
  excited(JointDensityMatrix::kExcited, JointDensityMatrix::kExcited) = 1.0;
  return JointDensityMatrix::product(excited, thermal_mixture(cfg.n_th, cfg.p1, cfg.dim));
}

JointDensityMatrix post_select_excited(const JointDensityMatrix& rho) {
  const CMatrix block = rho.field_block(JointDensityMatrix::kExcited, JointDensityMatrix::kExcited);
  const double weight = block.trace().real();
  if (!(weight > 1e-12)) throw NumericError("atomic reset: no population left in |e>");
  Eigen::Matrix2cd excited = Eigen::Matrix2cd::Zero();
  excited(JointDensityMatrix::kExcited, JointDensityMatrix::kExcited) = 1.0;
  CMatrix field = block / weight;
  field = 0.5 * (field + field.adjoint()).eval();
  return JointDensityMatrix::product(excited, field);
}

}  // namespace

SequenceRunner::SequenceRunner(const ExperimentConfig& cfg, const BathParams& bath)
    : cfg_(cfg), bath_(bath), rho_(initial_state(cfg)) {
  cfg_.validate();
  bath_.validate();
}

LindbladOptions SequenceRunner::options_for_window() const {
  LindbladOptions options;
  options.tol = cfg_.tol;
  options.t_start = clock_;
  if (cfg_.coupling == CouplingModel::kMotional) {
    const ExperimentConfig cfg = cfg_;
    options.envelope = [cfg](double t) { return cfg.envelope(t); };
  }
  return options;
}

void SequenceRunner::apply(const SequenceStep& s) {
  std::visit(overloaded{
                 [&](const step::Inject& inj) {
                   const double amp = injection_amplitude(inj.duration_us, cfg_);
                   if (amp != 0.0) rho_ = displace_field(rho_, std::polar(amp, inj.phase));
                 },
                 [&](const step::Resonant& r) { resonant_observed(r.t_i, {}); },
                 [&](const step::Wait& wt) {
                   if (wt.t_d < 0.0) throw DomainError("wait duration must be non-negative");
                   if (wt.t_d == 0.0) return;
                   JCParams jc = cfg_.jc();
                   LindbladOptions options;
                   options.tol = cfg_.tol;
                   options.t_start = clock_;
                   if (cfg_.wait == WaitModel::kDetuned) {
                     jc.delta = cfg_.wait_detuning;
                     if (cfg_.coupling == CouplingModel::kMotional) options = options_for_window();
                   } else {
                     jc.omega0 = 0.0;
                   }
                   rho_ = lindblad_evolve(rho_, jc, bath_, wt.t_d, options);
                   clock_ += wt.t_d;
                 },
                 [&](const step::ResetDiscardG&) { rho_ = post_select_excited(rho_); },
                 [](const step::MeasurePg&) {},
             },
             s);
}

void SequenceRunner::apply(std::span<const SequenceStep> steps) {
  validate_steps(steps);
  for (const auto& s : steps) apply(s);
}

std::vector<double> SequenceRunner::resonant_observed(double t_i, std::span<const double> observe_at) {
  if (!(t_i >= 0.0)) throw DomainError("resonant duration must be non-negative");
  std::vector<double> pg;
  pg.reserve(observe_at.size());
  const auto observer = [&](double, const CMatrix& m) {
    pg.push_back(m.block(cfg_.dim, cfg_.dim, cfg_.dim, cfg_.dim).trace().real());
  };

  if (cfg_.coupling == CouplingModel::kMotional) {
    rho_ = lindblad_evolve_observed(rho_, cfg_.jc(), bath_, t_i, options_for_window(), observe_at, observer);
  } else {
    std::vector<double> effective(observe_at.size());
    for (std::size_t k = 0; k < observe_at.size(); ++k) effective[k] = effective_time(observe_at[k], cfg_, clock_);
    const double total = effective_time(t_i, cfg_, clock_);
    LindbladOptions options;
    options.tol = cfg_.tol;
    rho_ = lindblad_evolve_observed(rho_, cfg_.jc(), bath_, total, options, effective, observer);
  }
  clock_ += t_i;
  return pg;
}

double SequenceRunner::detected_pg() const {
  return cfg_.detection.apply(std::clamp(ideal_pg(), 0.0, 1.0));
}

double run_sequence(std::span<const SequenceStep> steps, const ExperimentConfig& cfg, const BathParams& bath) {
  SequenceRunner runner(cfg, bath);
  runner.apply(steps);
  return runner.detected_pg();
}

namespace {

ProbeSweep observe_window(SequenceRunner& runner, std::span<const double> t_e_grid, const ExperimentConfig& cfg) {
  if (!std::is_sorted(t_e_grid.begin(), t_e_grid.end())) throw DomainError("effective-time grid must ascend");
  ProbeSweep out;
  out.t_e.assign(t_e_grid.begin(), t_e_grid.end());
  out.t_i.reserve(t_e_grid.size());
  const double start = runner.clock();
  for (double t_e : t_e_grid) out.t_i.push_back(interaction_time_for(t_e, cfg, start));
  const double total = out.t_i.empty() ? 0.0 : out.t_i.back();
  const std::vector<double> ideal = runner.resonant_observed(total, out.t_i);
  out.p_g.reserve(ideal.size());
  for (double p : ideal) out.p_g.push_back(cfg.detection.apply(std::clamp(p, 0.0, 1.0)));
  return out;
}

}  // namespace

ProbeSweep sweep_rabi(Complex beta, std::span<const double> t_e_grid, const ExperimentConfig& cfg,
                      const BathParams& bath) {
  SequenceRunner runner(cfg, bath);
  runner.apply(step::Inject::with_amplitude(beta, cfg));
  return observe_window(runner, t_e_grid, cfg);
}

std::vector<SequenceStep> CatProtocol::preparation(const ExperimentConfig& cfg) const {
  return {
      step::Inject::with_amplitude(beta, cfg),
      step::Resonant{t_i},
      step::ResetDiscardG{},
      step::Inject::with_amplitude(alpha, cfg),
      step::Wait{t_d},
  };
}

ProbeSweep sweep_after_steps(std::span<const SequenceStep> preparation, std::span<const double> t_e_grid,
                             const ExperimentConfig& cfg, const BathParams& bath) {
  for (const auto& s : preparation) {
    if (std::holds_alternative<step::MeasurePg>(s)) throw DomainError("preparation must not contain a measurement");
  }
  validate_steps(preparation);
  SequenceRunner runner(cfg, bath);
  runner.apply(preparation);
  return observe_window(runner, t_e_grid, cfg);
}

ProbeSweep sweep_probe_time(const CatProtocol& protocol, std::span<const double> t_e_grid,
                            const ExperimentConfig& cfg, const BathParams& bath) {
  SequenceRunner runner(cfg, bath);
  runner.apply(protocol.preparation(cfg));
  return observe_window(runner, t_e_grid, cfg);
}

std::vector<double> sweep_alpha(const CatProtocol& protocol, std::span<const double> alphas, double t_e,
                                const ExperimentConfig& cfg, const BathParams& bath) {
  const std::vector<SequenceStep> steps = protocol.preparation(cfg);
  SequenceRunner shared(cfg, bath);
  shared.apply(steps[0]);
  shared.apply(steps[1]);
  shared.apply(steps[2]);

  std::vector<double> out(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t k) {
    SequenceRunner runner = shared;
    runner.apply(step::Inject::with_amplitude(alphas[k], cfg));
    runner.apply(steps[4]);
    const double t_i = interaction_time_for(t_e, cfg, runner.clock());
    runner.apply(step::Resonant{t_i});
    out[k] = runner.detected_pg();
  });
  return out;
}

CMatrix prepared_field(const CatProtocol& protocol, const ExperimentConfig& cfg, const BathParams& bath) {
  SequenceRunner runner(cfg, bath);
  runner.apply(protocol.preparation(cfg));
  return runner.state().reduced_field();
}

}  // namespace revival
