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

// Experiment timelines: injections, resonant windows through the Gaussian
// mode, waits, the atomic reset and the detection law.

#include <span>
#include <variant>
#include <vector>

#include "revival/fock.hpp"
#include "revival/jc_dynamics.hpp"
#include "revival/types.hpp"

namespace revival {

/// Detection law P -> (aP + b) / (cP + d).
struct Homography {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  static Homography identity() { return {}; }

  /// Throws DegenerateHomography if the denominator vanishes on [0, 1] or ad = bc.
  void validate() const;
  double apply(double p_ideal) const;
  double inverse(double p_measured) const;
};

/// How the coupling of a resonant window is modeled.
enum class CouplingModel {
  kMotional,           // omega0 * exp(-(x0 + v t)^2 / w^2) along the atom clock
  kConstantEffective,  // constant omega0 over effective_time(t_i)
};

/// How a wait step is modeled.
enum class WaitModel {
  kDecoupled,  // coupling off, field relaxation only
  kDetuned,    // coupling on at detuning wait_detuning
};

/// Physical and instrumental parameters, SI units unless a field says otherwise.
struct ExperimentConfig {
  double omega0 = khz_to_rad_per_s(49.88);
  double v = 8.1;        // m/s
  double w = mm(6.0);    // m
  double x0 = mm(-1.72);  // signed position at t = 0, negative before the mode center (m)
  double t_cav = us(8100.0);
  double n_th = 0.38;
  double t_atom = std::numeric_limits<double>::infinity();
  double p1 = 0.094;
  Homography detection{1.0, 0.133, 0.297, 1.136};
  int dim = kDefaultDim;
  double injection_rate = 0.257;   // amplitude per μs
  double injection_offset = 0.05;  // μs
  CouplingModel coupling = CouplingModel::kMotional;
  WaitModel wait = WaitModel::kDecoupled;
  double wait_detuning = khz_to_rad_per_s(4040.0);
  double tol = 1e-8;

  void validate() const;
  JCParams jc() const;
  BathParams bath() const;
  /// Coupling multiplier at atom-clock time t (s).
  double envelope(double t) const;
};

/// ∫_{start}^{start + t_i} exp(-(x0 + v t)^2 / w^2) dt, in seconds.
double effective_time(double t_i, const ExperimentConfig& cfg, double start = 0.0);

/// Interaction time t_i whose effective time from `start` is t_e. Throws
/// DomainError if t_e exceeds what the remaining transit can provide.
double interaction_time_for(double t_e, const ExperimentConfig& cfg, double start = 0.0);

/// rate * (t_beta - offset); throws NegativeAmplitude below the offset.
double injection_amplitude(double t_beta_us, const ExperimentConfig& cfg);
/// Injection duration (μs) producing |beta|.
double injection_duration(double beta_abs, const ExperimentConfig& cfg);

double detection_homography(double p_ideal, const ExperimentConfig& cfg);
double detection_homography_inverse(double p_measured, const ExperimentConfig& cfg);

namespace step {

/// Displacement by injection_amplitude(duration_us) * e^{i phase}. Instantaneous.
struct Inject {
  double duration_us;
  double phase;

  /// The injection that displaces by the (complex) amplitude `alpha`.
  static Inject with_amplitude(Complex alpha, const ExperimentConfig& cfg);
};
struct Resonant {
  double t_i;  // s
};
struct Wait {
  double t_d;  // s
};
struct ResetDiscardG {};
struct MeasurePg {};

}  // namespace step

using SequenceStep = std::variant<step::Inject, step::Resonant, step::Wait, step::ResetDiscardG, step::MeasurePg>;

/// Throws DomainError for negative durations or a measurement that is not last.
void validate_steps(std::span<const SequenceStep> steps);

/// Runs the steps from |e> ⊗ thermal_mixture(p1) and returns the detected P_g
/// (an implicit measurement is taken when the list has none).
double run_sequence(std::span<const SequenceStep> steps, const ExperimentConfig& cfg, const BathParams& bath);

/// State of a running timeline. Resonant and wait steps advance the atom clock.
class SequenceRunner {
 public:
  SequenceRunner(const ExperimentConfig& cfg, const BathParams& bath);

  void apply(const SequenceStep& s);
  void apply(std::span<const SequenceStep> steps);

  /// Resonant window of total length t_i reporting the ideal P_g at each
  /// elapsed interaction time of `observe_at` (ascending, within [0, t_i]).
  std::vector<double> resonant_observed(double t_i, std::span<const double> observe_at);

  double clock() const { return clock_; }
  const JointDensityMatrix& state() const { return rho_; }
  double ideal_pg() const { return rho_.ground_population(); }
  double detected_pg() const;

 private:
  LindbladOptions options_for_window() const;

  ExperimentConfig cfg_;
  BathParams bath_;
  JointDensityMatrix rho_;
  double clock_ = 0.0;
};

/// Sampled P_g against interaction time.
struct ProbeSweep {
  std::vector<double> t_i;  // s
  std::vector<double> t_e;  // s
  std::vector<double> p_g;  // detected
};

/// Rabi protocol: inject beta, resonant window, detect. One integration
/// covers the whole grid of effective times.
ProbeSweep sweep_rabi(Complex beta, std::span<const double> t_e_grid, const ExperimentConfig& cfg,
                      const BathParams& bath);

/// Runs `preparation`, then a probe window sampled at the given effective
/// times (measured from the clock after preparation).
ProbeSweep sweep_after_steps(std::span<const SequenceStep> preparation, std::span<const double> t_e_grid,
                             const ExperimentConfig& cfg, const BathParams& bath);

/// Cat protocol parameters (SI).
struct CatProtocol {
  Complex beta = std::sqrt(13.2);
  double t_i = us(60.0);
  double t_d = us(6.0);
  Complex alpha = -0.6;

  /// Steps up to (excluding) the probe window.
  std::vector<SequenceStep> preparation(const ExperimentConfig& cfg) const;
};

/// P_g against the probe effective time t'_e.
ProbeSweep sweep_probe_time(const CatProtocol& protocol, std::span<const double> t_e_grid,
                            const ExperimentConfig& cfg, const BathParams& bath);

/// Detected P_g at probe effective time t_e for each alpha (the first
/// window is integrated once and shared).
std::vector<double> sweep_alpha(const CatProtocol& protocol, std::span<const double> alphas, double t_e,
                                const ExperimentConfig& cfg, const BathParams& bath);

/// Field state (atom traced out) entering the probe window.
CMatrix prepared_field(const CatProtocol& protocol, const ExperimentConfig& cfg, const BathParams& bath);

}  // namespace revival
