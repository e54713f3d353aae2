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

#include "revival/fock.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <fmt/format.h>

#include "revival/errors.hpp"

namespace revival {
namespace {

constexpr double kLeakageBound = 1e-8;
constexpr double kPhaseThreshold = 1e-12;

void check_dim(int dim) {
  if (dim < 2) throw DomainError("Fock truncation must be at least 2, got " + std::to_string(dim));
}

void check_leakage(double top_population, const char* where) {
  if (!(top_population < kLeakageBound)) {
    throw TruncationTooSmall(
        fmt::format("{}: population at the top Fock level is {:.3e} (limit 1e-8)", where, top_population));
  }
}

void check_guard(double r, int dim, const char* where) {
  if (dim < min_dim_for_amplitude(r)) {
    throw TruncationTooSmall(std::string(where) + ": amplitude " + std::to_string(r) +
                             " needs dim >= " + std::to_string(min_dim_for_amplitude(r)) +
                             ", got " + std::to_string(dim));
  }
}

// Unnormalized coherent amplitudes e^{-|b|^2/2} b^n / sqrt(n!) by recurrence.
CVector coherent_amplitudes(Complex beta, int dim) {
  CVector c(dim);
  c(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * beta / std::sqrt(static_cast<double>(n));
  return c;
}

CVector with_phase_convention(CVector v) {
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    if (std::abs(v(n)) > kPhaseThreshold) {
      v *= std::conj(v(n)) / std::abs(v(n));
      v(n) = std::abs(v(n));
      break;
    }
  }
  return v;
}

struct GeneratorEigen {
  CMatrix cvectors;
  RVector values;
};

// Eigendecomposition of X = i(a^dag - a). X is Hermitian and purely imaginary,
// so it is diagonalized as a complex Hermitian matrix.
std::shared_ptr<const GeneratorEigen> generator_eigen(int dim) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GeneratorEigen>> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(dim); it != cache.end()) return it->second;

  CMatrix x = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    x(n, n - 1) = Complex(0.0, s);   // i a^dag
    x(n - 1, n) = Complex(0.0, -s);  // -i a
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(x);
  auto eig = std::make_shared<GeneratorEigen>();
  eig->cvectors = solver.eigenvectors();
  eig->values = solver.eigenvalues();
  cache.emplace(dim, eig);
  return eig;
}

}  // namespace

int min_dim_for_amplitude(double r) {
  r = std::abs(r);
  return static_cast<int>(std::ceil(r * r + 6.0 * r + 10.0));
}

FieldState FieldState::from_amplitudes(CVector amplitudes) {
  check_dim(static_cast<int>(amplitudes.size()));
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("field state has zero or non-finite norm");
  amplitudes /= norm;
  check_leakage(std::norm(amplitudes(amplitudes.size() - 1)), "FieldState");
  return FieldState(with_phase_convention(std::move(amplitudes)));
}

double FieldState::mean_photon_number() const {
  double s = 0.0;
  for (int n = 0; n < dim(); ++n) s += n * std::norm(amps_(n));
  return s;
}

Complex FieldState::mean_field() const {
  Complex s = 0.0;
  for (int n = 1; n < dim(); ++n) s += std::conj(amps_(n - 1)) * std::sqrt(static_cast<double>(n)) * amps_(n);
  return s;
}

double FieldState::parity() const {
  double s = 0.0;
  for (int n = 0; n < dim(); ++n) s += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(amps_(n));
  return s;
}

FieldState fock_state(int n, int dim) {
  check_dim(dim);
  if (n < 0 || n >= dim) throw DomainError("Fock index outside truncation");
  CVector c = CVector::Zero(dim);
  c(n) = 1.0;
  return FieldState::from_amplitudes(std::move(c));
}

FieldState coherent_state(Complex beta, int dim) {
  check_dim(dim);
  check_guard(std::abs(beta), dim, "coherent_state");
  return FieldState::from_amplitudes(coherent_amplitudes(beta, dim));
}

FieldState cat_state(Complex beta, double relative_phase, int dim) {
  check_dim(dim);
  if (beta == Complex(0.0)) throw DomainError("cat_state needs a nonzero amplitude");
  check_guard(std::abs(beta), dim, "cat_state");
  const Complex i_beta = Complex(0.0, 1.0) * beta;
  CVector v = std::polar(1.0, relative_phase) * coherent_amplitudes(i_beta, dim) -
              coherent_amplitudes(-i_beta, dim);
  return FieldState::from_amplitudes(std::move(v));
}

ModeOperator annihilation_operator(int dim) {
  check_dim(dim);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {OperatorKind::kAnnihilation, std::move(a)};
}

ModeOperator number_operator(int dim) {
  check_dim(dim);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return {OperatorKind::kNumber, std::move(m)};
}

ModeOperator parity_operator(int dim) {
  check_dim(dim);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return {OperatorKind::kParity, std::move(m)};
}

ModeOperator identity_operator(int dim) {
  check_dim(dim);
  return {OperatorKind::kIdentity, CMatrix::Identity(dim, dim)};
}

ModeOperator displacement_operator(Complex alpha, int dim) {
  check_dim(dim);
  // alpha a^dag - alpha^* a = -i r R X R^dag with R = exp(i theta N), X = i(a^dag - a).
  const double r = std::abs(alpha);
  const double theta = std::arg(alpha);
  const auto eig = generator_eigen(dim);
  CMatrix v = eig->cvectors;
  for (int n = 0; n < dim; ++n) v.row(n) *= std::polar(1.0, theta * n);
  CVector phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::polar(1.0, -r * eig->values(k));
  CMatrix d = v * phases.asDiagonal() * v.adjoint();
  return {OperatorKind::kDisplacement, std::move(d)};
}

namespace {

// First `dim` columns of D(alpha) computed on a basis padded far enough that
// the truncated generator is exact for every input below `dim`.
CMatrix displacement_columns(Complex alpha, int dim) {
  const double r = std::abs(alpha);
  const int padded = dim + min_dim_for_amplitude(r) + static_cast<int>(std::ceil(2.0 * r * std::sqrt(dim)));
  return displacement_operator(alpha, padded).matrix.leftCols(dim);
}

// Population at or above the top retained level.
double edge_population(const RVector& diagonal, int dim) {
  return diagonal.tail(diagonal.size() - (dim - 1)).sum();
}

}  // namespace

FieldState displace(const FieldState& state, Complex alpha) {
  const int dim = state.dim();
  check_guard(std::abs(alpha) + std::abs(state.mean_field()), dim, "displace");
  const CVector wide = displacement_columns(alpha, dim) * state.amplitudes();
  check_leakage(edge_population(wide.cwiseAbs2(), dim), "displace");
  CVector out = wide.head(dim);
  out /= out.norm();
  return FieldState(std::move(out));
}

// ---------------------------------------------------------------------------

void check_density_matrix(const CMatrix& rho, double trace_tol) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) throw DomainError("density matrix must be square");
  if (!rho.allFinite()) throw DomainError("density matrix has non-finite entries");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw DomainError(fmt::format("density matrix not Hermitian (residual {:.3e})", herm));
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > trace_tol) throw DomainError(fmt::format("density matrix trace is {:.12f}", tr));
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -1e-8) {
    throw DomainError(fmt::format("density matrix has eigenvalue {:.3e}", solver.eigenvalues()(0)));
  }
}

JointDensityMatrix::JointDensityMatrix(CMatrix matrix, int dim) : dim_(dim) {
  check_dim(dim);
  if (matrix.rows() != 2 * dim || matrix.cols() != 2 * dim) {
    throw DomainError("joint density matrix must be (2 dim) x (2 dim)");
  }
  // Restore exact Hermiticity lost to rounding before validating.
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw DomainError("joint density matrix not Hermitian");
  m_ = 0.5 * (matrix + matrix.adjoint());
  check_density_matrix(m_);
}

JointDensityMatrix JointDensityMatrix::product(const Eigen::Matrix2cd& atom, const CMatrix& field) {
  const int dim = static_cast<int>(field.rows());
  CMatrix m(2 * dim, 2 * dim);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block(i * dim, j * dim, dim, dim) = atom(i, j) * field;
  return JointDensityMatrix(std::move(m), dim);
}

JointDensityMatrix JointDensityMatrix::from_pure(const CVector& psi, int dim) {
  if (psi.size() != 2 * dim) throw DomainError("joint pure state has wrong length");
  const CVector u = psi / psi.norm();
  return JointDensityMatrix(u * u.adjoint(), dim);
}

CMatrix JointDensityMatrix::field_block(int atom_row, int atom_col) const {
  return m_.block(atom_row * dim_, atom_col * dim_, dim_, dim_);
}

CMatrix JointDensityMatrix::reduced_field() const { return field_block(kExcited, kExcited) + field_block(kGround, kGround); }

Eigen::Matrix2cd JointDensityMatrix::reduced_atom() const {
  Eigen::Matrix2cd a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = m_.block(i * dim_, j * dim_, dim_, dim_).trace();
  return a;
}

double JointDensityMatrix::ground_population() const {
  return m_.block(dim_, dim_, dim_, dim_).trace().real();
}

double JointDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

RVector photon_distribution(const FieldState& state) { return state.amplitudes().cwiseAbs2(); }

RVector photon_distribution(const CMatrix& field_rho) {
  check_density_matrix(field_rho);
  RVector p = field_rho.diagonal().real().cwiseMax(0.0);
  return p / p.sum();
}

RVector photon_distribution(const JointDensityMatrix& rho) { return photon_distribution(rho.reduced_field()); }

Complex mean_field(const CMatrix& field_rho) {
  Complex s = 0.0;
  for (Eigen::Index n = 1; n < field_rho.rows(); ++n) s += std::sqrt(static_cast<double>(n)) * field_rho(n, n - 1);
  return s;
}

double purity(const CMatrix& rho) { return (rho * rho).trace().real(); }

CMatrix displace(const CMatrix& field_rho, Complex alpha) {
  const int dim = static_cast<int>(field_rho.rows());
  check_guard(std::abs(alpha) + std::abs(mean_field(field_rho)), dim, "displace");
  const CMatrix d = displacement_columns(alpha, dim);
  const CMatrix wide = d * field_rho * d.adjoint();
  check_leakage(edge_population(wide.diagonal().real(), dim), "displace");
  CMatrix out = wide.topLeftCorner(dim, dim);
  out /= out.trace().real();
  return out;
}

JointDensityMatrix displace_field(const JointDensityMatrix& rho, Complex alpha) {
  const int dim = rho.dim();
  const CMatrix field = rho.reduced_field();
  check_guard(std::abs(alpha) + std::abs(mean_field(field)), dim, "displace_field");
  const CMatrix d = displacement_columns(alpha, dim);
  CMatrix out(2 * dim, 2 * dim);
  double edge = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const CMatrix wide = d * rho.field_block(i, j) * d.adjoint();
      if (i == j) edge += edge_population(wide.diagonal().real(), dim);
      out.block(i * dim, j * dim, dim, dim) = wide.topLeftCorner(dim, dim);
    }
  }
  check_leakage(edge, "displace_field");
  out /= out.trace().real();
  return JointDensityMatrix(std::move(out), dim);
}

double overlap_fidelity(const CVector& a, const CVector& b) { return std::norm(a.dot(b)); }

}  // namespace revival
