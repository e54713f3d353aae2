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
#include <string>

#include "revival/errors.hpp"
#include "revival/jc_dynamics.hpp"

namespace revival {

void JCParams::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("omega0 must be positive");
  if (!std::isfinite(delta)) throw DomainError("detuning must be finite");
  if (dim < 2) throw DomainError("Fock truncation must be at least 2");
}

void BathParams::validate() const {
  if (!(t_cav > 0.0)) throw DomainError("t_cav must be positive");
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) throw DomainError("n_th must be non-negative");
  if (!(t_atom > 0.0)) throw DomainError("t_atom must be positive");
}

CMatrix jc_hamiltonian(const JCParams& params) {
  params.validate();
  const int dim = params.dim;
  const int e = JointDensityMatrix::kExcited;
  const int g = JointDensityMatrix::kGround;
  CMatrix h = CMatrix::Zero(2 * dim, 2 * dim);
  for (int n = 0; n < dim; ++n) {
    h(JointDensityMatrix::index(e, n, dim), JointDensityMatrix::index(e, n, dim)) = 0.5 * params.delta;
    h(JointDensityMatrix::index(g, n, dim), JointDensityMatrix::index(g, n, dim)) = -0.5 * params.delta;
  }
  for (int n = 0; n + 1 < dim; ++n) {
    const double c = 0.5 * params.omega0 * std::sqrt(static_cast<double>(n + 1));
    const int ie = JointDensityMatrix::index(e, n, dim);
    const int ig = JointDensityMatrix::index(g, n + 1, dim);
    h(ie, ig) = c;
    h(ig, ie) = c;
  }
  return h;
}

CVector joint_product(const Eigen::Vector2cd& atom, const FieldState& field) {
  const int dim = field.dim();
  CVector psi(2 * dim);
  psi.head(dim) = atom(0) * field.amplitudes();
  psi.tail(dim) = atom(1) * field.amplitudes();
  return psi;
}

CVector evolve_unitary(const CVector& psi, const JCParams& params, double t) {
  params.validate();
  const int dim = params.dim;
  if (psi.size() != 2 * dim) throw DomainError("joint state length does not match 2 dim");
  const Complex i(0.0, 1.0);
  const double half_delta = 0.5 * params.delta;
  CVector out(2 * dim);

  // Uncoupled corners of the truncated ladder.
  out(dim) = std::exp(i * half_delta * t) * psi(dim);                     // |g,0>
  out(dim - 1) = std::exp(-i * half_delta * t) * psi(dim - 1);             // |e,dim-1>

  for (int n = 0; n + 1 < dim; ++n) {
    const double g = 0.5 * params.omega0 * std::sqrt(static_cast<double>(n + 1));
    const double w = std::hypot(half_delta, g);
    const double c = std::cos(w * t);
    const double s_over_w = w > 0.0 ? std::sin(w * t) / w : t;
    const Complex ce = psi(n);
    const Complex cg = psi(dim + n + 1);
    out(n) = (c - i * s_over_w * half_delta) * ce - i * s_over_w * g * cg;
    out(dim + n + 1) = -i * s_over_w * g * ce + (c + i * s_over_w * half_delta) * cg;
  }
  return out;
}

double ground_population(const CVector& psi, int dim) { return psi.tail(dim).squaredNorm(); }

CMatrix thermal_mixture(double n_th, std::optional<double> p1_cap, int dim) {
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) throw DomainError("n_th must be non-negative");
  if (dim < 2) throw DomainError("Fock truncation must be at least 2");
  CMatrix rho = CMatrix::Zero(dim, dim);
  if (p1_cap) {
    const double p1 = *p1_cap;
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw DomainError("one-photon probability must lie in [0, 1]");
    rho(0, 0) = 1.0 - p1;
    rho(1, 1) = p1;
    return rho;
  }
  // p(n) = n_th^n / (1 + n_th)^{n+1}, renormalized on the truncated basis.
  const double ratio = n_th / (1.0 + n_th);
  double p = 1.0 / (1.0 + n_th);
  double total = 0.0;
  for (int n = 0; n < dim; ++n) {
    rho(n, n) = p;
    total += p;
    p *= ratio;
  }
  if (rho(dim - 1, dim - 1).real() / total >= 1e-8) {
    throw TruncationTooSmall("thermal state with n_th = " + std::to_string(n_th) + " leaks past dim " +
                             std::to_string(dim));
  }
  return rho / total;
}

}  // namespace revival
