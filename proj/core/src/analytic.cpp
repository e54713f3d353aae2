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

#include "revival/analytic.hpp"

#include <cmath>
#include <string>

#include "revival/errors.hpp"
#include "revival/fock.hpp"

namespace revival {

double rabi_signal(std::span<const double> p, double omega0, double t_e) {
  double s = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) s += p[n] * std::cos(omega0 * std::sqrt(n + 1.0) * t_e);
  return 0.5 * (1.0 - s);
}

RevivalTimescales timescales(double n_bar, double omega0) {
  if (!(n_bar > 0.0)) throw DomainError("timescales need nbar > 0");
  if (!(omega0 > 0.0)) throw DomainError("timescales need omega0 > 0");
  const double root = std::sqrt(n_bar);
  return {2.0 * std::sqrt(2.0) / omega0, 4.0 * kPi * root / omega0, omega0 * root, omega0 / (4.0 * root)};
}

FactorizedState factorized_state(double beta, double omega0, double t_e) {
  if (!(beta > 0.0)) throw DomainError("factorized_state needs a real, positive beta");
  const double n_bar = beta * beta;
  const RevivalTimescales ts = timescales(n_bar, omega0);
  const double fast = ts.omega_r * t_e;
  const double slow = ts.omega_slow * t_e;
  const double root_half = std::sqrt(0.5);

  FactorizedState out;
  // |a±> = e^{±i Ω_r t/2} [e^{±i Ω t}|e> ∓ |g>] / sqrt(2)
  out.atom_plus << std::polar(root_half, 0.5 * fast + slow), -std::polar(root_half, 0.5 * fast);
  out.atom_minus << std::polar(root_half, -0.5 * fast - slow), std::polar(root_half, -0.5 * fast);
  // |c±> = e^{∓i Ω_r t/4} |beta e^{±i Ω t}>
  out.field_plus = {std::polar(beta, slow), -0.25 * fast};
  out.field_minus = {std::polar(beta, -slow), 0.25 * fast};
  out.expansion_valid = n_bar >= 5.0;
  return out;
}

Eigen::VectorXcd factorized_joint_vector(const FactorizedState& state, int dim) {
  const CVector plus = std::polar(1.0, state.field_plus.phase) * coherent_state(state.field_plus.amplitude, dim).amplitudes();
  const CVector minus =
      std::polar(1.0, state.field_minus.phase) * coherent_state(state.field_minus.amplitude, dim).amplitudes();
  CVector psi(2 * dim);
  for (int s = 0; s < 2; ++s) {
    psi.segment(s * dim, dim) = (state.atom_plus(s) * plus + state.atom_minus(s) * minus) * std::sqrt(0.5);
  }
  return psi;
}

double cat_parity(double n_bar) {
  if (!(n_bar >= 0.0)) throw DomainError("cat_parity needs nbar >= 0");
  return -std::cos(kPi * n_bar);
}

double parity_to_pg(double parity) {
  if (!(parity >= -1.0 && parity <= 1.0)) throw DomainError("parity must lie in [-1, 1]");
  return 0.5 * (1.0 - parity);
}

double pg_to_parity(double p_g) {
  if (!(p_g >= 0.0 && p_g <= 1.0)) throw DomainError("probability must lie in [0, 1]");
  return 1.0 - 2.0 * p_g;
}

double wigner_origin_from_parity(double parity) {
  if (!(parity >= -1.0 && parity <= 1.0)) throw DomainError("parity must lie in [-1, 1]");
  return 2.0 * parity / kPi;
}

double decoherence_time(double t_cav, double n_bar, double n_th) {
  if (!(t_cav >= 0.0 && n_bar >= 0.0 && n_th >= 0.0)) throw DomainError("decoherence_time arguments must be >= 0");
  const double rate = n_bar * (1.0 + 2.0 * n_th) + n_th;
  if (!(rate > 0.0)) throw DomainError("decoherence_time undefined for nbar = n_th = 0");
  return t_cav / (2.0 * rate);
}

DispersiveComparison dispersive_comparison(double delta, double omega0, double n_bar) {
  if (!(omega0 > 0.0) || !(n_bar > 0.0) || !(delta > 0.0)) {
    throw DomainError("dispersive_comparison needs positive delta, omega0 and nbar");
  }
  const double resonant_rate = omega0 * std::sqrt(n_bar);
  return {kTwoPi * delta / (omega0 * omega0), delta / resonant_rate, delta > resonant_rate};
}

}  // namespace revival
