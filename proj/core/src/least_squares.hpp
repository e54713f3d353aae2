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

// Thin RAII wrappers over the GSL nonlinear least-squares and simplex
// minimizers. Internal to the library.

#include <cstddef>
#include <functional>
#include <vector>

namespace revival::detail {

using ResidualFn = std::function<void(const double* x, double* r)>;
using JacobianFn = std::function<void(const double* x, double* jac_row_major)>;

struct LsqOptions {
  std::size_t max_iter = 500;
  double xtol = 1e-10;
  double gtol = 1e-12;
  double ftol = 0.0;
  /// Solve the normal equations by Cholesky instead of QR on J. Cheaper for
  /// tall, well-conditioned problems.
  bool normal_equations = false;
};

struct LsqResult {
  std::vector<double> x;
  std::vector<double> covariance;  // p x p row-major, (J^T J)^{-1}, unscaled
  double chi2 = 0.0;               // sum of squared residuals
  std::size_t iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt (trust region) on n residuals of p parameters. The
/// Jacobian is taken by forward differences when `jacobian` is empty.
LsqResult levenberg_marquardt(std::size_t n, std::size_t p, const ResidualFn& residuals, std::vector<double> x0,
                              const LsqOptions& options = {}, const JacobianFn& jacobian = {});

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Nelder-Mead (nmsimplex2) on a scalar objective.
SimplexResult nelder_mead(std::size_t p, const std::function<double(const double*)>& objective, std::vector<double> x0,
                          const std::vector<double>& step, std::size_t max_iter = 2000, double size_tol = 1e-10);

}  // namespace revival::detail
