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

// Closed-form results for collapse, revival and resonant cat generation.

#include <span>

#include <Eigen/Dense>

#include "revival/types.hpp"

namespace revival {

struct RevivalTimescales {
  double t_c;         // collapse time 2 sqrt(2) / omega0 (s)
  double t_r;         // revival time 4 pi sqrt(nbar) / omega0 (s)
  double omega_r;     // mean Rabi angular frequency omega0 sqrt(nbar)
  double omega_slow;  // component rotation rate omega0 / (4 sqrt(nbar))
};

/// P_g(t_e) = 1/2 [1 - sum_n p(n) cos(omega0 sqrt(n+1) t_e)] for an atom starting in |e>.
double rabi_signal(std::span<const double> p, double omega0, double t_e);

RevivalTimescales timescales(double n_bar, double omega0);

/// One coherent component of the first-order factorized atom-field state:
/// the field label is |amplitude>, multiplied by exp(i phase).
struct CoherentLabel {
  Complex amplitude;
  double phase;
};

struct FactorizedState {
  Eigen::Vector2cd atom_plus;   // (e, g) components
  Eigen::Vector2cd atom_minus;
  CoherentLabel field_plus;
  CoherentLabel field_minus;
  /// False when nbar < 5, where the first-order expansion is unreliable.
  bool expansion_valid;
};

/// |Psi(t_e)> ≈ (|a+>|c+> + |a->|c->)/sqrt(2) for |e> ⊗ |beta>, beta real.
FactorizedState factorized_state(double beta, double omega0, double t_e);

/// The joint vector (atom-major, truncated at dim) of a FactorizedState.
Eigen::VectorXcd factorized_joint_vector(const FactorizedState& state, int dim);

/// -cos(pi nbar).
double cat_parity(double n_bar);

/// (1 - parity) / 2; throws DomainError outside [-1, 1].
double parity_to_pg(double parity);
/// 1 - 2 P_g; throws DomainError outside [0, 1].
double pg_to_parity(double p_g);
/// W(0) = 2 parity / pi.
double wigner_origin_from_parity(double parity);

/// T_cav / (2 [nbar (1 + 2 n_th) + n_th]).
double decoherence_time(double t_cav, double n_bar, double n_th);

struct DispersiveComparison {
  double t_parity_cat;  // 2 pi delta / omega0^2 (s)
  double speedup;       // delta / (omega0 sqrt(nbar))
  bool dispersive_valid;  // delta > omega0 sqrt(nbar)
};

DispersiveComparison dispersive_comparison(double delta, double omega0, double n_bar);

}  // namespace revival
