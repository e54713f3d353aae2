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
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "revival/analytic.hpp"
#include "revival/errors.hpp"
#include "revival/sequence.hpp"

namespace revival {
namespace {

double quadrature_effective_time(double t_i, double x0, double v, double w) {
  const auto f = [&](double t) {
    const double x = (x0 + v * t) / w;
    return std::exp(-x * x);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t_i, 15, 1e-14);
}

ExperimentConfig ideal_config() {
  ExperimentConfig cfg;
  cfg.p1 = 0.0;
  cfg.n_th = 0.0;
  cfg.detection = Homography::identity();
  return cfg;
}

double swing(const ProbeSweep& s, double lo_us, double hi_us) {
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < s.t_e.size(); ++k) {
    const double t = to_us(s.t_e[k]);
    if (t < lo_us || t > hi_us) continue;
    lo = std::min(lo, s.p_g[k]);
    hi = std::max(hi, s.p_g[k]);
  }
  return hi - lo;
}

std::vector<double> te_grid(double hi_us, double step_us) {
  std::vector<double> g;
  for (double t = 0.0; t <= hi_us + 1e-9; t += step_us) g.push_back(us(t));
  return g;
}

TEST(EffectiveTime, MatchesQuadrature) {
  for (double x0_mm : {-1.72, 1.72}) {
    ExperimentConfig cfg;
    cfg.x0 = mm(x0_mm);
    for (double t_us : {20.0, 60.0, 150.0}) {
      EXPECT_NEAR(effective_time(us(t_us), cfg), quadrature_effective_time(us(t_us), cfg.x0, cfg.v, cfg.w), 1e-9 * us(1.0))
          << x0_mm << " " << t_us;
    }
  }
}

TEST(EffectiveTime, BasicProperties) {
  ExperimentConfig cfg;
  EXPECT_EQ(effective_time(0.0, cfg), 0.0);
  double prev = 0.0;
  for (double t_us = 1.0; t_us < 1500.0; t_us += 7.0) {
    const double te = effective_time(us(t_us), cfg);
    EXPECT_GE(te, prev);
    EXPECT_LE(te, us(t_us));
    prev = te;
  }
  EXPECT_THROW(effective_time(-1.0, cfg), DomainError);
}

TEST(EffectiveTime, FullTransitAsymptote) {
  ExperimentConfig cfg;
  cfg.x0 = mm(-40.0);
  EXPECT_NEAR(effective_time(us(20000.0), cfg) / ((cfg.w / cfg.v) * std::sqrt(kPi)), 1.0, 1e-12);
}

TEST(EffectiveTime, InverseRoundTrip) {
  ExperimentConfig cfg;
  for (double te_us : {0.5, 10.0, 146.0, 300.0}) {
    const double t_i = interaction_time_for(us(te_us), cfg);
    EXPECT_NEAR(effective_time(t_i, cfg), us(te_us), 1e-15);
  }
  EXPECT_THROW(interaction_time_for(us(5000.0), cfg), DomainError);
}

TEST(Injection, Calibration) {
  ExperimentConfig cfg;
  EXPECT_DOUBLE_EQ(injection_amplitude(0.05, cfg), 0.0);
  EXPECT_NEAR(injection_amplitude(14.0, cfg), 3.585, 5e-4);
  EXPECT_NEAR(std::pow(injection_amplitude(14.0, cfg), 2), 12.85, 5e-3);
  for (double t : {1.0, 4.0, 9.5}) {
    EXPECT_NEAR(injection_amplitude(2.0 * t - cfg.injection_offset, cfg), 2.0 * injection_amplitude(t, cfg), 1e-12);
  }
  EXPECT_THROW(injection_amplitude(0.0, cfg), NegativeAmplitude);
  EXPECT_NEAR(injection_duration(injection_amplitude(7.3, cfg), cfg), 7.3, 1e-12);
}

TEST(Homography, Values) {
  ExperimentConfig cfg;
  EXPECT_NEAR(detection_homography(0.0, cfg), 0.1171, 5e-5);
  EXPECT_NEAR(detection_homography(1.0, cfg), 1.133 / 1.433, 1e-15);
  EXPECT_NEAR(detection_homography(1.0, cfg), 0.7907, 1e-4);
  ExperimentConfig id = cfg;
  id.detection = Homography::identity();
  EXPECT_DOUBLE_EQ(detection_homography(0.37, id), 0.37);
}

TEST(Homography, RoundTrip) {
  ExperimentConfig cfg;
  for (int k = 0; k <= 100; ++k) {
    const double p = k / 100.0;
    EXPECT_NEAR(detection_homography_inverse(detection_homography(p, cfg), cfg), p, 1e-12);
  }
}

TEST(Homography, Degenerate) {
  EXPECT_THROW((Homography{1.0, 0.0, -2.0, 1.0}.validate()), DegenerateHomography);
  EXPECT_THROW((Homography{1.0, 1.0, 1.0, 1.0}.validate()), DegenerateHomography);
  EXPECT_NO_THROW((Homography{1.0, 0.133, 0.297, 1.136}.validate()));
}

TEST(Steps, Validation) {
  const std::vector<SequenceStep> late_measure{step::MeasurePg{}, step::Wait{1e-6}};
  EXPECT_THROW(validate_steps(late_measure), DomainError);
  const std::vector<SequenceStep> negative{step::Resonant{-1e-6}};
  EXPECT_THROW(validate_steps(negative), DomainError);
  const std::vector<SequenceStep> ok{step::Inject{1.0, 0.0}, step::Resonant{1e-6}, step::MeasurePg{}};
  EXPECT_NO_THROW(validate_steps(ok));
}

TEST(RunSequence, EmptySequenceGivesDetectionFloor) {
  ExperimentConfig cfg;
  EXPECT_NEAR(run_sequence({}, cfg, cfg.bath()), detection_homography(0.0, cfg), 1e-15);
}

TEST(RunSequence, LosslessMatchesRabiSum) {
  const ExperimentConfig cfg = ideal_config();
  const double beta = std::sqrt(13.2);
  std::vector<double> p(cfg.dim);
  for (int n = 0; n < cfg.dim; ++n) p[n] = std::exp(2.0 * n * std::log(beta) - 13.2 - std::lgamma(n + 1.0));
  for (double t_us : {15.0, 60.0, 140.0, 210.0}) {
    const std::vector<SequenceStep> steps{step::Inject::with_amplitude(beta, cfg), step::Resonant{us(t_us)},
                                          step::MeasurePg{}};
    const double want = rabi_signal(p, cfg.omega0, effective_time(us(t_us), cfg));
    EXPECT_NEAR(run_sequence(steps, cfg, BathParams::lossless()), want, 1e-6) << t_us;
  }
}

TEST(RunSequence, ConstantCouplingEquivalent) {
  ExperimentConfig motional;
  ExperimentConfig constant = motional;
  constant.coupling = CouplingModel::kConstantEffective;
  const CatProtocol cat;
  const auto grid = te_grid(160.0, 4.0);
  auto worst = [&](const BathParams& bath) {
    const ProbeSweep a = sweep_probe_time(cat, grid, motional, bath);
    const ProbeSweep b = sweep_probe_time(cat, grid, constant, bath);
    double w = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) w = std::max(w, std::abs(a.p_g[k] - b.p_g[k]));
    return w;
  };
  EXPECT_LT(worst(BathParams::lossless()), 1e-6);
  // With losses the constant model relaxes over t_e instead of the longer t_i.
  EXPECT_LT(worst(motional.bath()), 2e-3);
}

TEST(RunSequence, DetunedWaitCloseToDecoupled) {
  ExperimentConfig decoupled;
  ExperimentConfig detuned = decoupled;
  detuned.wait = WaitModel::kDetuned;
  const CatProtocol cat;
  const auto grid = te_grid(160.0, 8.0);
  const ProbeSweep a = sweep_probe_time(cat, grid, decoupled, decoupled.bath());
  const ProbeSweep b = sweep_probe_time(cat, grid, detuned, detuned.bath());
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, std::abs(a.p_g[k] - b.p_g[k]));
  EXPECT_LT(worst, 2e-2);
}

TEST(RunSequence, ResetConditionsOnExcitedAtom) {
  ExperimentConfig cfg;
  const double beta = std::sqrt(13.2);
  const double t_i = interaction_time_for(0.5 * timescales(13.2, cfg.omega0).t_r, cfg);
  SequenceRunner runner(cfg, cfg.bath());
  runner.apply(step::Inject::with_amplitude(beta, cfg));
  runner.apply(step::Resonant{t_i});
  const CMatrix block = runner.state().field_block(JointDensityMatrix::kExcited, JointDensityMatrix::kExcited);
  const double conditional = purity(block / block.trace().real());
  runner.apply(step::ResetDiscardG{});
  EXPECT_NEAR(runner.state().matrix().trace().real(), 1.0, 1e-12);
  EXPECT_NEAR(runner.ideal_pg(), 0.0, 1e-15);
  EXPECT_GE(purity(runner.state().reduced_field()), conditional - 1e-12);
}

TEST(Protocols, VacuumRabiShape) {
  ExperimentConfig cfg;
  const auto grid = te_grid(to_us(effective_time(us(400.0), cfg)), 0.25);
  const ProbeSweep s = sweep_rabi(0.0, grid, cfg, cfg.bath());
  double mean = 0.0;
  for (double p : s.p_g) mean += p;
  mean /= s.p_g.size();
  std::vector<double> ups;
  for (std::size_t k = 1; k < s.p_g.size(); ++k) {
    if (s.p_g[k - 1] < mean && s.p_g[k] >= mean) ups.push_back(to_us(s.t_e[k]));
  }
  ASSERT_GE(ups.size(), 2u);
  EXPECT_GE(ups.size(), 17u);
  EXPECT_LE(ups.size(), 23u);
  const double period = (ups.back() - ups.front()) / (ups.size() - 1);
  EXPECT_NEAR(period, 1e3 / 49.88, 0.2);
}

TEST(Protocols, DualRevival) {
  ExperimentConfig cfg;
  const CatProtocol cat;
  const ProbeSweep s = sweep_probe_time(cat, te_grid(170.0, 0.5), cfg, cfg.bath());
  const double collapsed = swing(s, 25.0, 40.0);
  const double half = swing(s, 55.0, 75.0);
  const double between = swing(s, 95.0, 115.0);
  const double full = swing(s, 125.0, 150.0);
  EXPECT_GT(half, 5.0 * collapsed);
  EXPECT_GT(full, 2.0 * between);
  EXPECT_GT(half, 2.0 * between);
}

TEST(Protocols, CustomPreparationRejectsMeasurement) {
  ExperimentConfig cfg;
  const std::vector<SequenceStep> steps{step::Inject{1.0, 0.0}, step::MeasurePg{}};
  const auto grid = te_grid(10.0, 1.0);
  EXPECT_THROW(sweep_after_steps(steps, grid, cfg, cfg.bath()), DomainError);
}

}  // namespace
}  // namespace revival
