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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "revival/analytic.hpp"
#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/jc_dynamics.hpp"

namespace revival {
namespace {

const double kOmega0 = khz_to_rad_per_s(49.88);

std::vector<double> poisson(double nbar, int dim) {
  std::vector<double> p(dim);
  for (int n = 0; n < dim; ++n) p[n] = std::exp(n * std::log(nbar) - nbar - std::lgamma(n + 1.0));
  return p;
}

double envelope_max(const std::vector<double>& p, double lo_us, double hi_us) {
  double best = 0.0;
  for (double t_us = lo_us; t_us <= hi_us; t_us += 0.01) best = std::max(best, std::abs(rabi_signal(p, kOmega0, us(t_us)) - 0.5));
  return best;
}

// |sum p(n) e^{i omega0 sqrt(n+1) t}| / 2: the envelope of the oscillating part.
double envelope_at(const std::vector<double>& p, double t) {
  Complex z = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) z += p[n] * std::polar(1.0, kOmega0 * std::sqrt(n + 1.0) * t);
  return 0.5 * std::abs(z);
}

TEST(RabiSignal, VacuumIsSineSquared) {
  const std::vector<double> vac{1.0};
  EXPECT_DOUBLE_EQ(rabi_signal(vac, kOmega0, 0.0), 0.0);
  for (double t_us : {1.0, 5.0, 10.0, 33.3}) {
    const double s = std::sin(0.5 * kOmega0 * us(t_us));
    EXPECT_NEAR(rabi_signal(vac, kOmega0, us(t_us)), s * s, 1e-14);
  }
}

TEST(RabiSignal, RevivalNear146us) {
  const auto p = poisson(13.2, 50);
  double at = 0.0, best = 0.0;
  for (double t_us = 130.0; t_us <= 160.0; t_us += 0.05) {
    const double e = envelope_at(p, us(t_us));
    if (e > best) {
      best = e;
      at = t_us;
    }
  }
  // Higher-order dispersion pushes the peak a few us past 4 pi sqrt(nbar) / omega0.
  EXPECT_GE(at, 140.0);
  EXPECT_LE(at, 152.0);
  // the signal touches its envelope within one fast period of the maximum
  EXPECT_NEAR(envelope_max(p, at - 3.0, at + 3.0), best, 0.02);
}

TEST(RabiSignal, CollapsedPlateau) {
  const auto p = poisson(13.2, 50);
  EXPECT_LT(envelope_max(p, 30.0, 55.0), 0.01);
}

TEST(RabiSignal, SingleParityClassAtHalfRevival) {
  // Restricted to one parity class, the linear phase term is common to every n at
  // T_r/2; what is left is the quadratic term pi (n - nbar)^2 / (4 nbar), whose
  // Gaussian average shrinks the swing to 1/2 (1 + pi^2/4)^{-1/4}.
  const double want = 0.5 * std::pow(1.0 + kPi * kPi / 4.0, -0.25);
  for (double nbar : {10.0, 13.2, 20.0}) {
    for (int parity : {0, 1}) {
      auto p = poisson(nbar, 70);
      double total = 0.0;
      for (int n = 0; n < 70; ++n) {
        if (n % 2 != parity) p[n] = 0.0;
        total += p[n];
      }
      for (double& v : p) v /= total;
      const double half = to_us(0.5 * timescales(nbar, kOmega0).t_r);
      EXPECT_NEAR(envelope_max(p, half - 15.0, half + 15.0), want, 0.02) << nbar << " " << parity;
    }
  }
}

TEST(Timescales, PaperParameters) {
  const RevivalTimescales ts = timescales(13.2, kOmega0);
  EXPECT_NEAR(to_us(ts.t_r), 145.7, 0.05);
  EXPECT_NEAR(to_us(ts.t_c), 9.02, 0.005);
  EXPECT_DOUBLE_EQ(ts.omega_r, kOmega0 * std::sqrt(13.2));
  EXPECT_DOUBLE_EQ(ts.omega_slow, kOmega0 / (4.0 * std::sqrt(13.2)));
  EXPECT_DOUBLE_EQ(timescales(1.0, kOmega0).t_r, 4.0 * kPi / kOmega0);
  EXPECT_THROW(timescales(0.0, kOmega0), DomainError);
}

TEST(FactorizedState, InitialLabels) {
  const double beta = std::sqrt(13.2);
  const FactorizedState s = factorized_state(beta, kOmega0, 0.0);
  EXPECT_NEAR(std::abs(s.field_plus.amplitude - beta), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.field_minus.amplitude - beta), 0.0, 1e-14);
  const double r = std::sqrt(0.5);
  EXPECT_NEAR(std::abs(s.atom_plus(0) - r) + std::abs(s.atom_plus(1) + r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.atom_minus(0) - r) + std::abs(s.atom_minus(1) - r), 0.0, 1e-14);
  EXPECT_TRUE(s.expansion_valid);
  EXPECT_FALSE(factorized_state(2.0, kOmega0, 0.0).expansion_valid);
}

TEST(FactorizedState, AtomDisentanglesAtHalfRevival) {
  const double beta = std::sqrt(13.2);
  const double t = 0.5 * timescales(13.2, kOmega0).t_r;
  const FactorizedState s = factorized_state(beta, kOmega0, t);
  EXPECT_NEAR(std::abs(s.atom_plus.dot(s.atom_minus)), 1.0, 1e-12);
  EXPECT_NEAR(std::arg(s.field_plus.amplitude), kPi / 2.0, 1e-12);
  EXPECT_NEAR(std::arg(s.field_minus.amplitude), -kPi / 2.0, 1e-12);
  EXPECT_NEAR(std::abs(s.field_plus.amplitude), beta, 1e-12);
}

TEST(FactorizedState, OverlapWithExactEvolution) {
  const double beta = std::sqrt(13.2);
  const double t_r = timescales(13.2, kOmega0).t_r;
  JCParams jc;
  const CVector psi0 = joint_product(Eigen::Vector2cd(1.0, 0.0), coherent_state(beta, 50));
  auto fidelity = [&](double t) {
    const CVector approx = factorized_joint_vector(factorized_state(beta, kOmega0, t), 50).normalized();
    return overlap_fidelity(approx, evolve_unitary(psi0, jc, t));
  };
  EXPECT_GT(fidelity(0.1 * t_r), 0.97);
  EXPECT_GT(fidelity(0.2 * t_r), 0.9);
  // The expansion drops the quadratic phase spread, which costs fidelity by T_r/2.
  EXPECT_GT(fidelity(0.5 * t_r), 0.65);
}

TEST(CatParity, Values) {
  EXPECT_DOUBLE_EQ(cat_parity(4.0), -1.0);
  EXPECT_DOUBLE_EQ(cat_parity(0.0), -1.0);
  EXPECT_NEAR(cat_parity(13.2), -std::cos(13.2 * kPi), 1e-15);
  EXPECT_NEAR(cat_parity(13.2), 0.809017, 1e-6);
  EXPECT_THROW(cat_parity(-1.0), DomainError);
}

TEST(CatParity, MatchesTruncatedCat) {
  const FieldState cat = cat_state(std::sqrt(13.2), kPi * 13.2, 60);
  double parity = 0.0;
  for (int n = 0; n < 60; ++n) parity += (n % 2 ? -1.0 : 1.0) * std::norm(cat.amplitude(n));
  EXPECT_NEAR(parity, cat_parity(13.2), 2e-2);
}

TEST(ParityMapping, Values) {
  EXPECT_DOUBLE_EQ(parity_to_pg(1.0), 0.0);
  EXPECT_NEAR(parity_to_pg(-0.48), 0.74, 1e-15);
  EXPECT_NEAR(wigner_origin_from_parity(-1.0), -2.0 / kPi, 1e-15);
  EXPECT_THROW(parity_to_pg(1.5), DomainError);
  EXPECT_THROW(pg_to_parity(-0.1), DomainError);
}

TEST(ParityMapping, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double x = u(rng);
    EXPECT_NEAR(pg_to_parity(parity_to_pg(x)), x, 1e-15);
  }
}

TEST(DecoherenceTime, Values) {
  EXPECT_DOUBLE_EQ(decoherence_time(1.0, 1.0, 0.0), 0.5);
  EXPECT_NEAR(to_us(decoherence_time(us(8100.0), 13.2, 0.38)), 171.5, 0.1);
  EXPECT_NEAR(decoherence_time(1.0, 26.4, 0.0) / decoherence_time(1.0, 13.2, 0.0), 0.5, 1e-15);
  EXPECT_THROW(decoherence_time(1.0, 0.0, 0.0), DomainError);
}

TEST(DispersiveComparison, Values) {
  const double nbar = 13.2;
  const auto edge = dispersive_comparison(kOmega0 * std::sqrt(nbar), kOmega0, nbar);
  EXPECT_NEAR(edge.speedup, 1.0, 1e-15);
  EXPECT_NEAR(dispersive_comparison(10.0 * kOmega0 * std::sqrt(nbar), kOmega0, nbar).speedup, 10.0, 1e-13);
  const auto mhz = dispersive_comparison(kTwoPi * 1e6, kOmega0, nbar);
  EXPECT_NEAR(to_us(mhz.t_parity_cat), 401.9, 0.05);
  EXPECT_TRUE(mhz.dispersive_valid);
}

}  // namespace
}  // namespace revival
