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
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "revival/errors.hpp"
#include "revival/jc_dynamics.hpp"

namespace revival {
namespace {

namespace odeint = boost::numeric::odeint;

using State = std::vector<Complex>;


double rate_of(double lifetime) { return std::isinf(lifetime) ? 0.0 : 1.0 / lifetime; }

State to_state(const CMatrix& m) { return State(m.data(), m.data() + m.size()); }

CMatrix to_matrix(const State& x, int n) { return Eigen::Map<const CMatrix>(x.data(), n, n); }

}  // namespace

LindbladGenerator::LindbladGenerator(const JCParams& params, const BathParams& bath) {
  if (!(params.omega0 >= 0.0)) throw DomainError("omega0 must be non-negative");
  if (params.dim < 2) throw DomainError("Fock truncation must be at least 2");
  bath.validate();
  const int dim = params.dim;
  n_ = 2 * dim;
  half_omega0_ = 0.5 * params.omega0;
  const double kappa = rate_of(bath.t_cav);
  gamma_down_ = kappa * (1.0 + bath.n_th);
  gamma_up_ = kappa * bath.n_th;
  gamma_atom_ = rate_of(bath.t_atom);

  z_.resize(n_);
  partner_.assign(n_, -1);
  coupling_.assign(n_, 0.0);
  lower_.assign(n_, -1);
  lower_amp_.assign(n_, 0.0);
  raise_.assign(n_, -1);
  raise_amp_.assign(n_, 0.0);
  excited_of_.assign(n_, -1);

  for (int s = 0; s < 2; ++s) {
    const bool excited = (s == JointDensityMatrix::kExcited);
    for (int n = 0; n < dim; ++n) {
      const int r = JointDensityMatrix::index(s, n, dim);
      // Truncated a a^dag vanishes on the top level, which keeps the trace exact.
      const double aad = (n + 1 < dim) ? n + 1.0 : 0.0;
      const double decay = 0.5 * (gamma_down_ * n + gamma_up_ * aad + (excited ? gamma_atom_ : 0.0));
      const double energy = (excited ? 0.5 : -0.5) * params.delta;
      z_[r] = Complex(decay, energy);
      if (excited && n + 1 < dim) {
        partner_[r] = JointDensityMatrix::index(JointDensityMatrix::kGround, n + 1, dim);
        coupling_[r] = std::sqrt(n + 1.0);
      } else if (!excited && n >= 1) {
        partner_[r] = JointDensityMatrix::index(JointDensityMatrix::kExcited, n - 1, dim);
        coupling_[r] = std::sqrt(static_cast<double>(n));
      }
      if (n + 1 < dim) {
        lower_[r] = r + 1;
        lower_amp_[r] = std::sqrt(n + 1.0);
      }
      if (n >= 1) {
        raise_[r] = r - 1;
        raise_amp_[r] = std::sqrt(static_cast<double>(n));
      }
      if (!excited) excited_of_[r] = JointDensityMatrix::index(JointDensityMatrix::kExcited, n, dim);
    }
  }
}

void LindbladGenerator::apply(const Complex* rho, Complex* out, double coupling_scale) const {
  const int n = n_;
  const Complex minus_i_g(0.0, -half_omega0_ * coupling_scale);
  const bool has_down = gamma_down_ > 0.0;
  const bool has_up = gamma_up_ > 0.0;
  const bool has_atom = gamma_atom_ > 0.0;
  auto at = [rho, n](int r, int c) { return rho[r + static_cast<std::ptrdiff_t>(c) * n]; };

  for (int c = 0; c < n; ++c) {
    const Complex zc = std::conj(z_[c]);
    const int pc = partner_[c];
    const double kc = coupling_[c];
    const int lc = lower_[c];
    const int uc = raise_[c];
    const int ec = excited_of_[c];
    const Complex* col = rho + static_cast<std::ptrdiff_t>(c) * n;
    Complex* dst = out + static_cast<std::ptrdiff_t>(c) * n;
    for (int r = 0; r < n; ++r) {
      Complex acc = -(z_[r] + zc) * col[r];
      Complex comm = 0.0;
      if (partner_[r] >= 0) comm += coupling_[r] * col[partner_[r]];
      if (pc >= 0) comm -= kc * at(r, pc);
      acc += minus_i_g * comm;
      if (has_down && lower_[r] >= 0 && lc >= 0) {
        acc += gamma_down_ * lower_amp_[r] * lower_amp_[c] * at(lower_[r], lc);
      }
      if (has_up && raise_[r] >= 0 && uc >= 0) {
        acc += gamma_up_ * raise_amp_[r] * raise_amp_[c] * at(raise_[r], uc);
      }
      if (has_atom && excited_of_[r] >= 0 && ec >= 0) {
        acc += gamma_atom_ * at(excited_of_[r], ec);
      }
      dst[r] = acc;
    }
  }
}

namespace {

// Near-pure states come out of the integrator with eigenvalues a few tol below
// zero. Those are clipped and the trace restored; anything larger is a failure.
CMatrix restore_positivity(CMatrix m, double tol) {
  m = (0.5 * (m + m.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  const double lowest = solver.eigenvalues()(0);
  if (lowest >= 0.0) return m;
  const double allowed = std::max(1e-6, 1e3 * tol);
  if (lowest < -allowed) {
    throw NumericError("Lindblad integration lost positivity (eigenvalue " + std::to_string(lowest) + ")");
  }
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  m = solver.eigenvectors() * clipped.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
  m = (0.5 * (m + m.adjoint())).eval();
  return m / m.trace().real();
}

}  // namespace

JointDensityMatrix lindblad_evolve(const JointDensityMatrix& rho, const JCParams& params, const BathParams& bath,
                                   double t, const LindbladOptions& options) {
  return lindblad_evolve_observed(rho, params, bath, t, options, {}, {});
}

JointDensityMatrix lindblad_evolve_observed(const JointDensityMatrix& rho, const JCParams& params,
                                            const BathParams& bath, double t, const LindbladOptions& options,
                                            std::span<const double> observe_at, const LindbladObserver& observer) {
  if (rho.dim() != params.dim) throw DomainError("density matrix truncation does not match JCParams.dim");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolution time must be finite and non-negative");
  if (!(options.tol > 0.0)) throw DomainError("integrator tolerance must be positive");
  if (!std::is_sorted(observe_at.begin(), observe_at.end())) throw DomainError("observation times must ascend");
  if (!observe_at.empty() && (observe_at.front() < 0.0 || observe_at.back() > t * (1.0 + 1e-12))) {
    throw DomainError("observation time outside the evolution window");
  }

  const LindbladGenerator generator(params, bath);
  const int n = generator.size();
  const auto& envelope = options.envelope;
  const double t_start = options.t_start;

  auto system = [&](const State& x, State& dxdt, double elapsed) {
    const double scale = envelope ? envelope(t_start + elapsed) : 1.0;
    generator.apply(x.data(), dxdt.data(), scale);
  };

  // Merge observation times with 0 and t; integrate_times visits each once.
  std::vector<double> times;
  times.reserve(observe_at.size() + 2);
  times.push_back(0.0);
  for (double s : observe_at) times.push_back(std::min(s, t));
  times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  State x = to_state(rho.matrix());
  if (t == 0.0) {
    if (observer) {
      for (double s : observe_at) observer(s, rho.matrix());
    }
    return rho;
  }

  std::size_t next_obs = 0;
  auto obs = [&](const State& xs, double elapsed) {
    if (!observer) return;
    while (next_obs < observe_at.size() && std::min(observe_at[next_obs], t) <= elapsed) {
      observer(observe_at[next_obs], to_matrix(xs, n));
      ++next_obs;
    }
  };

  const double dt0 = std::min(options.initial_step, t);
  auto stepper = odeint::make_dense_output(options.tol, options.tol, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt0, obs,
                            odeint::max_step_checker(50'000'000));
  } catch (const odeint::step_adjustment_error& e) {
    throw StepSizeUnderflow(std::string("Lindblad step size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    throw StepSizeUnderflow(std::string("Lindblad integrator made no progress: ") + e.what());
  }
  for (const Complex& v : x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw StepSizeUnderflow("Lindblad state diverged");
  }
  return JointDensityMatrix(restore_positivity(to_matrix(x, n), options.tol), params.dim);
}

}  // namespace revival
