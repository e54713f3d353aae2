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

#include <gtest/gtest.h>

#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/jc_dynamics.hpp"

namespace revival {
namespace {

// Poisson weights from log-gamma, independent of the library recursion.
double poisson(int n, double mean) { return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0)); }

TEST(CoherentState, ZeroAmplitudeIsVacuum) {
  const FieldState s = coherent_state(0.0, 50);
  EXPECT_EQ(s.amplitude(0), Complex(1.0, 0.0));
  for (int n = 1; n < 50; ++n) EXPECT_EQ(s.amplitude(n), Complex(0.0, 0.0));
}

TEST(CoherentState, PhotonStatisticsArePoisson) {
  const FieldState s = coherent_state(std::sqrt(13.2), 50);
  const RVector p = photon_distribution(s);
  for (int n = 0; n < 50; ++n) EXPECT_NEAR(p(n), poisson(n, 13.2), 1e-10) << "n = " << n;
}

TEST(CoherentState, MeanPhotonNumber) {
  // Extended-precision direct sum of n p(n) over the untruncated distribution.
  long double mean = 0.0L, term = std::exp(-13.2L);
  for (int n = 1; n < 200; ++n) {
    term *= 13.2L / n;
    mean += n * term;
  }
  const FieldState s = coherent_state(std::sqrt(13.2), 50);
  EXPECT_NEAR(static_cast<double>(mean), 13.2, 1e-12);
  EXPECT_NEAR(s.mean_photon_number(), 13.2, 1e-6);
}

TEST(CoherentState, LowestAmplitudeIsRealPositive) {
  const FieldState s = coherent_state(Complex(-1.2, 0.7), 50);
  EXPECT_GT(s.amplitude(0).real(), 0.0);
  EXPECT_DOUBLE_EQ(s.amplitude(0).imag(), 0.0);
}

TEST(CoherentState, LeakageGuardThrows) {
  EXPECT_THROW(coherent_state(5.0, 20), TruncationTooSmall);
  EXPECT_NO_THROW(coherent_state(5.0, 70));
}

TEST(CatState, EvenMeanGivesOddSupport) {
  const FieldState s = cat_state(2.0, kPi * 4.0, 50);
  const RVector p = photon_distribution(s);
  for (int n = 0; n < 50; n += 2) EXPECT_LT(p(n), 1e-20) << "n = " << n;
}

TEST(CatState, ParityMatchesCosineLaw) {
  const FieldState s = cat_state(std::sqrt(13.2), kPi * 13.2, 50);
  EXPECT_NEAR(s.parity(), -std::cos(kPi * 13.2), 2e-2);
}

TEST(CatState, Normalized) {
  for (double nbar : {1.0, 5.0, 13.2}) {
    EXPECT_NEAR(cat_state(std::sqrt(nbar), 0.3, 50).amplitudes().squaredNorm(), 1.0, 1e-10);
  }
}

TEST(CatState, SupportAlternatesForIntegerPhase) {
  const RVector odd = photon_distribution(cat_state(std::sqrt(6.0), 0.0, 50));
  const RVector even = photon_distribution(cat_state(std::sqrt(6.0), kPi, 50));
  for (int k = 0; 2 * k + 1 < 50; ++k) {
    EXPECT_LT(odd(2 * k) * odd(2 * k + 1), 1e-20);
    EXPECT_LT(even(2 * k) * even(2 * k + 1), 1e-20);
  }
  EXPECT_GT(odd(1), 1e-3);
  EXPECT_GT(even(0), 1e-3);
}

TEST(CatState, ZeroAmplitudeRejected) { EXPECT_THROW(cat_state(0.0, 0.0, 50), DomainError); }

TEST(Displace, VacuumGivesCoherentState) {
  const Complex alpha(1.3, 0.7);
  const FieldState d = displace(fock_state(0, 50), alpha);
  const FieldState c = coherent_state(alpha, 50);
  // displace() keeps the operator phase; compare after removing the global phase.
  const Complex phase = d.amplitude(0) / std::abs(d.amplitude(0));
  for (int n = 0; n < 50; ++n) EXPECT_LT(std::abs(d.amplitude(n) / phase - c.amplitude(n)), 1e-8) << n;
}

TEST(Displace, InverseRestoresState) {
  const FieldState psi = cat_state(1.5, 0.4, 50);
  const FieldState back = displace(displace(psi, Complex(0.8, -0.3)), Complex(-0.8, 0.3));
  const Complex overlap = psi.amplitudes().dot(back.amplitudes());
  EXPECT_NEAR(std::abs(overlap), 1.0, 1e-10);
  for (int n = 0; n < 50; ++n) EXPECT_LT(std::abs(back.amplitude(n) * std::conj(overlap) - psi.amplitude(n)), 1e-8);
}

TEST(Displace, MeanPhotonNumberShifts) {
  for (auto [alpha, beta] : {std::pair{0.7, 1.9}, std::pair{-1.1, 2.5}, std::pair{2.0, -0.4}}) {
    const FieldState s = displace(coherent_state(beta, 50), alpha);
    EXPECT_NEAR(s.mean_photon_number(), (alpha + beta) * (alpha + beta), 1e-6);
  }
}

TEST(Displace, MixedStateMatchesPureState) {
  const FieldState psi = coherent_state(Complex(0.5, 1.0), 50);
  const CMatrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  const FieldState moved = displace(psi, Complex(-0.3, 0.9));
  const CMatrix expected = moved.amplitudes() * moved.amplitudes().adjoint();
  EXPECT_LT((displace(rho, Complex(-0.3, 0.9)) - expected).norm(), 1e-9);
}

TEST(Displace, LeakageGuardThrows) { EXPECT_THROW(displace(coherent_state(3.0, 50), 4.0), TruncationTooSmall); }

TEST(PhotonDistribution, FockState) {
  const RVector p = photon_distribution(fock_state(3, 20));
  for (int n = 0; n < 20; ++n) EXPECT_DOUBLE_EQ(p(n), n == 3 ? 1.0 : 0.0);
}

TEST(PhotonDistribution, ThermalIsGeometric) {
  const double nth = 0.38;
  const RVector p = photon_distribution(thermal_mixture(nth, std::nullopt, 50));
  for (int n = 0; n < 50; ++n) EXPECT_NEAR(p(n), std::pow(nth, n) / std::pow(1.0 + nth, n + 1), 1e-9);
}

TEST(PhotonDistribution, JointInputIsTracedOverAtom) {
  Eigen::Matrix2cd atom;
  atom << 0.3, 0.0, 0.0, 0.7;
  const FieldState f = coherent_state(1.0, 30);
  const JointDensityMatrix rho = JointDensityMatrix::product(atom, f.amplitudes() * f.amplitudes().adjoint());
  EXPECT_LT((photon_distribution(rho) - photon_distribution(f)).norm(), 1e-12);
}

TEST(ModeOperator, AnnihilationEntries) {
  const CMatrix a = annihilation_operator(8).matrix;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) EXPECT_DOUBLE_EQ(a(r, c).real(), c == r + 1 ? std::sqrt(double(c)) : 0.0);
  }
}

TEST(ModeOperator, DisplacementAndParityUnitary) {
  const int dim = 50;
  const CMatrix id = CMatrix::Identity(dim, dim);
  for (const CMatrix& u : {displacement_operator(Complex(1.2, -0.4), dim).matrix, parity_operator(dim).matrix}) {
    const CMatrix r = u.adjoint() * u - id;
    EXPECT_LT(Eigen::JacobiSVD<CMatrix>(r).singularValues()(0), 1e-9);
  }
}

TEST(ModeOperator, ParityIsDiagonalSign) {
  const CMatrix p = parity_operator(10).matrix;
  for (int r = 0; r < 10; ++r) {
    for (int c = 0; c < 10; ++c) EXPECT_EQ(p(r, c), Complex(r == c ? (r % 2 ? -1.0 : 1.0) : 0.0, 0.0));
  }
}

TEST(ModeOperator, ParityAnticommutesWithAnnihilation) {
  const CMatrix p = parity_operator(30).matrix;
  const CMatrix a = annihilation_operator(30).matrix;
  EXPECT_LT((p * a * p + a).norm(), 1e-10);
}

TEST(ModeOperator, NumberOperatorDiagonal) {
  const CMatrix n = number_operator(6).matrix;
  for (int k = 0; k < 6; ++k) EXPECT_DOUBLE_EQ(n(k, k).real(), k);
  EXPECT_EQ(number_operator(6).kind, OperatorKind::kNumber);
}

TEST(JointDensityMatrix, RejectsInvalidMatrices) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 0.5;
  EXPECT_THROW(JointDensityMatrix(m, 2), DomainError);  // trace 0.5
  m(1, 1) = 0.5;
  m(0, 1) = 0.3;
  EXPECT_THROW(JointDensityMatrix(m, 2), DomainError);  // not Hermitian
  m(1, 0) = 0.3;
  EXPECT_NO_THROW(JointDensityMatrix(m, 2));
  m(0, 1) = m(1, 0) = 0.8;
  EXPECT_THROW(JointDensityMatrix(m, 2), DomainError);  // negative eigenvalue
}

TEST(JointDensityMatrix, AtomMajorOrdering) {
  EXPECT_EQ(JointDensityMatrix::index(JointDensityMatrix::kExcited, 3, 10), 3);
  EXPECT_EQ(JointDensityMatrix::index(JointDensityMatrix::kGround, 3, 10), 13);
}

}  // namespace
}  // namespace revival
