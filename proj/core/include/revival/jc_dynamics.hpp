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

// Atom-field dynamics: the Jaynes-Cummings Hamiltonian, exact lossless
// propagation and Lindblad master-equation integration.

#include <functional>
#include <optional>
#include <vector>
#include <limits>
#include <span>

#include "revival/fock.hpp"
#include "revival/types.hpp"

namespace revival {

struct JCParams {
  double omega0 = khz_to_rad_per_s(49.88);  // vacuum Rabi angular frequency (rad/s)
  double delta = 0.0;                        // atom - cavity detuning (rad/s)
  int dim = kDefaultDim;

  void validate() const;
};

struct BathParams {
  double t_cav = std::numeric_limits<double>::infinity();   // cavity energy damping time (s)
  double n_th = 0.0;                                         // mean thermal photon number
  double t_atom = std::numeric_limits<double>::infinity();  // atomic lifetime (s)

  static BathParams lossless() { return {}; }
  void validate() const;
};

/// H / hbar = (delta/2) sigma_z + (omega0/2)(a sigma+ + a^dag sigma-), rotating frame
/// of the cavity, sigma+ = |e><g|. Joint ordering as in JointDensityMatrix.
CMatrix jc_hamiltonian(const JCParams& params);

/// |atom> ⊗ |field> in the joint ordering.
CVector joint_product(const Eigen::Vector2cd& atom, const FieldState& field);

/// Exact e^{-iHt}|psi> by 2x2 diagonalization of every excitation manifold.
CVector evolve_unitary(const CVector& psi, const JCParams& params, double t);

/// Ground-state population of a joint pure state.
double ground_population(const CVector& psi, int dim);

/// Bose-Einstein state of mean n_th, or (1-p1)|0><0| + p1|1><1| when p1_cap is given.
CMatrix thermal_mixture(double n_th, std::optional<double> p1_cap, int dim = kDefaultDim);

/// Multiplier of omega0 as a function of absolute time (s). Constant 1 by default.
using CouplingEnvelope = std::function<double(double)>;

struct LindbladOptions {
  double tol = 1e-8;
  double initial_step = 1e-9;  // s
  /// Multiplies omega0 at absolute time t; null means 1.
  CouplingEnvelope envelope;
  /// Absolute time at which the evolution starts (only the envelope sees it).
  double t_start = 0.0;
};

/// Called at each requested observation time with the elapsed time since
/// t_start and the (not re-validated) joint density matrix.
using LindbladObserver = std::function<void(double elapsed, const CMatrix& rho)>;

/// Integrates drho/dt = -i[H, rho] + kappa (1 + n_th) D[a] rho + kappa n_th D[a^dag] rho
/// + (1/t_atom) D[sigma-] rho, kappa = 1/t_cav, with adaptive Dormand-Prince 4(5).
JointDensityMatrix lindblad_evolve(const JointDensityMatrix& rho, const JCParams& params,
                                   const BathParams& bath, double t, const LindbladOptions& options = {});

/// As above, additionally reporting the state at each of `observe_at`
/// (elapsed times, ascending, each in [0, t]).
JointDensityMatrix lindblad_evolve_observed(const JointDensityMatrix& rho, const JCParams& params,
                                            const BathParams& bath, double t, const LindbladOptions& options,
                                            std::span<const double> observe_at, const LindbladObserver& observer);

/// Right-hand side of the master equation, exposed for tests and benchmarks.
/// Writes d rho / dt into `out` for a column-major 2dim x 2dim matrix.
class LindbladGenerator {
 public:
  LindbladGenerator(const JCParams& params, const BathParams& bath);

  void apply(const Complex* rho, Complex* out, double coupling_scale) const;
  int size() const { return n_; }

 private:
  int n_;
  double half_omega0_;
  double gamma_down_, gamma_up_, gamma_atom_;
  std::vector<Complex> z_;         // decay + i energy per row
  std::vector<int> partner_;       // H coupling partner per row, -1 if none
  std::vector<double> coupling_;   // sqrt factor of the partner coupling
  std::vector<int> lower_;         // (s, n+1) row, -1 if none
  std::vector<double> lower_amp_;  // sqrt(n+1)
  std::vector<int> raise_;         // (s, n-1) row, -1 if none
  std::vector<double> raise_amp_;  // sqrt(n)
  std::vector<int> excited_of_;    // for g rows: the matching e row, else -1
};

}  // namespace revival
