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

// Truncated Fock-space states and operators for a single cavity mode, and the
// joint atom ⊗ field density matrix.
//
// Basis ordering for every joint object is atom-major: index = atom * dim + n
// with atom e = 0, g = 1.

#include <Eigen/Dense>

#include "revival/types.hpp"

namespace revival {

/// Smallest truncation the leakage guard accepts for a field of amplitude |r|.
int min_dim_for_amplitude(double r);

/// Normalized pure state of the cavity mode on a truncated Fock basis.
///
/// Values are immutable. Every factory normalizes, enforces the truncation
/// leakage bound |c_{dim-1}|^2 < 1e-8 and fixes the global phase so that the
/// lowest nonzero amplitude is real and positive.
class FieldState {
 public:
  static FieldState from_amplitudes(CVector amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  Complex amplitude(int n) const { return amps_(n); }

  double mean_photon_number() const;
  Complex mean_field() const;  // <a>
  double parity() const;

 private:
  explicit FieldState(CVector amplitudes) : amps_(std::move(amplitudes)) {}
  friend FieldState displace(const FieldState&, Complex);

  CVector amps_;
};

FieldState fock_state(int n, int dim = kDefaultDim);
FieldState coherent_state(Complex beta, int dim = kDefaultDim);

/// Normalized e^{i phase}|i beta> - |-i beta>, overlap included.
FieldState cat_state(Complex beta, double relative_phase, int dim = kDefaultDim);

/// D(alpha)|state>. No phase convention is applied, so D(a)D(-a) = 1 exactly.
FieldState displace(const FieldState& state, Complex alpha);

enum class OperatorKind { kAnnihilation, kNumber, kDisplacement, kParity, kIdentity };

struct ModeOperator {
  OperatorKind kind;
  CMatrix matrix;
};

ModeOperator annihilation_operator(int dim);
ModeOperator number_operator(int dim);
ModeOperator parity_operator(int dim);
ModeOperator identity_operator(int dim);

/// exp(alpha a^dag - alpha^* a) from the exact eigendecomposition of the
/// truncated generator. The decomposition is cached per dimension.
ModeOperator displacement_operator(Complex alpha, int dim);

/// Density matrix on (two-level atom) ⊗ (Fock space), validated on construction:
/// Hermitian to 1e-10, unit trace to 1e-9, smallest eigenvalue >= -1e-8.
class JointDensityMatrix {
 public:
  static constexpr int kExcited = 0;
  static constexpr int kGround = 1;

  JointDensityMatrix(CMatrix matrix, int dim);

  static JointDensityMatrix product(const Eigen::Matrix2cd& atom, const CMatrix& field);
  static JointDensityMatrix from_pure(const CVector& psi, int dim);

  static int index(int atom, int n, int dim) { return atom * dim + n; }

  int dim() const { return dim_; }
  const CMatrix& matrix() const { return m_; }

  CMatrix field_block(int atom_row, int atom_col) const;
  CMatrix reduced_field() const;
  Eigen::Matrix2cd reduced_atom() const;
  double ground_population() const;
  double min_eigenvalue() const;

 private:
  CMatrix m_;
  int dim_;
};

/// Throws DomainError unless `rho` is a Hermitian, unit-trace, positive matrix.
void check_density_matrix(const CMatrix& rho, double trace_tol = 1e-9);

/// p(n) >= 0 with sum 1. Joint inputs are partial-traced over the atom first.
RVector photon_distribution(const FieldState& state);
RVector photon_distribution(const CMatrix& field_rho);
RVector photon_distribution(const JointDensityMatrix& rho);

Complex mean_field(const CMatrix& field_rho);
double purity(const CMatrix& rho);

/// D(alpha) rho D(alpha)^dag with the same leakage guard as the pure-state version.
CMatrix displace(const CMatrix& field_rho, Complex alpha);

/// Displaces the field part of a joint state: (1 ⊗ D) rho (1 ⊗ D)^dag.
JointDensityMatrix displace_field(const JointDensityMatrix& rho, Complex alpha);

/// Fidelity |<a|b>|^2 between two pure vectors of equal length.
double overlap_fidelity(const CVector& a, const CVector& b);

}  // namespace revival
