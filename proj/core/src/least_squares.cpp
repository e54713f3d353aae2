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

#include "least_squares.hpp"

#include <cmath>
#include <memory>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_matrix.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "revival/errors.hpp"

namespace revival::detail {

namespace {

struct GslVectorFree {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct GslMatrixFree {
  void operator()(gsl_matrix* m) const { gsl_matrix_free(m); }
};
struct WorkspaceFree {
  void operator()(gsl_multifit_nlinear_workspace* w) const { gsl_multifit_nlinear_free(w); }
};
struct SimplexFree {
  void operator()(gsl_multimin_fminimizer* s) const { gsl_multimin_fminimizer_free(s); }
};

using VectorPtr = std::unique_ptr<gsl_vector, GslVectorFree>;
using MatrixPtr = std::unique_ptr<gsl_matrix, GslMatrixFree>;

// GSL aborts on errors by default; the wrappers check status codes instead.
struct ErrorHandlerGuard {
  gsl_error_handler_t* previous = gsl_set_error_handler_off();
  ~ErrorHandlerGuard() { gsl_set_error_handler(previous); }
};

struct LsqContext {
  const ResidualFn* residuals;
  const JacobianFn* jacobian;
  std::size_t n;
  std::size_t p;
  std::vector<double> jac;
  std::vector<double> x;
  std::vector<double> f;
};

// GSL may pass strided views (the finite-difference Jacobian writes columns).
int lsq_f(const gsl_vector* x, void* params, gsl_vector* f) {
  auto* ctx = static_cast<LsqContext*>(params);
  ctx->x.resize(ctx->p);
  ctx->f.resize(ctx->n);
  for (std::size_t j = 0; j < ctx->p; ++j) ctx->x[j] = gsl_vector_get(x, j);
  (*ctx->residuals)(ctx->x.data(), ctx->f.data());
  for (std::size_t i = 0; i < ctx->n; ++i) {
    if (!std::isfinite(ctx->f[i])) return GSL_EDOM;
    gsl_vector_set(f, i, ctx->f[i]);
  }
  return GSL_SUCCESS;
}

int lsq_df(const gsl_vector* x, void* params, gsl_matrix* jac) {
  auto* ctx = static_cast<LsqContext*>(params);
  ctx->jac.resize(ctx->n * ctx->p);
  ctx->x.resize(ctx->p);
  for (std::size_t j = 0; j < ctx->p; ++j) ctx->x[j] = gsl_vector_get(x, j);
  (*ctx->jacobian)(ctx->x.data(), ctx->jac.data());
  for (std::size_t i = 0; i < ctx->n; ++i) {
    for (std::size_t j = 0; j < ctx->p; ++j) gsl_matrix_set(jac, i, j, ctx->jac[i * ctx->p + j]);
  }
  return GSL_SUCCESS;
}

double simplex_f(const gsl_vector* x, void* params) {
  const auto* fn = static_cast<const std::function<double(const double*)>*>(params);
  const double v = (*fn)(x->data);
  return std::isfinite(v) ? v : GSL_POSINF;
}

}  // namespace

LsqResult levenberg_marquardt(std::size_t n, std::size_t p, const ResidualFn& residuals, std::vector<double> x0,
                              const LsqOptions& options, const JacobianFn& jacobian) {
  if (x0.size() != p || n < p) throw DomainError("least squares: inconsistent problem size");
  ErrorHandlerGuard guard;

  LsqContext ctx{&residuals, &jacobian, n, p, {}, {}, {}};
  gsl_multifit_nlinear_fdf fdf;
  fdf.f = lsq_f;
  fdf.df = jacobian ? lsq_df : nullptr;
  fdf.fvv = nullptr;
  fdf.n = n;
  fdf.p = p;
  fdf.params = &ctx;

  gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
  params.trs = gsl_multifit_nlinear_trs_lm;
  params.scale = gsl_multifit_nlinear_scale_more;
  if (options.normal_equations) params.solver = gsl_multifit_nlinear_solver_cholesky;
  std::unique_ptr<gsl_multifit_nlinear_workspace, WorkspaceFree> work(
      gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, n, p));
  if (!work) throw FitDiverged("least squares: workspace allocation failed");

  gsl_vector_view x0_view = gsl_vector_view_array(x0.data(), p);
  LsqResult out;
  if (gsl_multifit_nlinear_init(&x0_view.vector, &fdf, work.get()) != GSL_SUCCESS) {
    throw FitDiverged("least squares: model not finite at the starting point");
  }
  int info = 0;
  const int status = gsl_multifit_nlinear_driver(options.max_iter, options.xtol, options.gtol, options.ftol, nullptr,
                                                 nullptr, &info, work.get());
  const gsl_vector* x = gsl_multifit_nlinear_position(work.get());
  const gsl_vector* f = gsl_multifit_nlinear_residual(work.get());
  out.x.assign(x->data, x->data + p);
  gsl_blas_ddot(f, f, &out.chi2);
  out.iterations = gsl_multifit_nlinear_niter(work.get());
  // ENOPROG: no step lowers chi2 any further, i.e. the start is already a minimum.
  out.converged = status == GSL_SUCCESS || info == GSL_ENOPROG;

  MatrixPtr covar(gsl_matrix_alloc(p, p));
  gsl_multifit_nlinear_covar(gsl_multifit_nlinear_jac(work.get()), 0.0, covar.get());
  out.covariance.assign(covar->data, covar->data + p * p);
  return out;
}

SimplexResult nelder_mead(std::size_t p, const std::function<double(const double*)>& objective, std::vector<double> x0,
                          const std::vector<double>& step, std::size_t max_iter, double size_tol) {
  if (x0.size() != p || step.size() != p) throw DomainError("simplex: inconsistent problem size");
  ErrorHandlerGuard guard;

  gsl_multimin_function fn;
  fn.n = p;
  fn.f = simplex_f;
  fn.params = const_cast<std::function<double(const double*)>*>(&objective);

  VectorPtr x(gsl_vector_alloc(p));
  VectorPtr ss(gsl_vector_alloc(p));
  for (std::size_t i = 0; i < p; ++i) {
    gsl_vector_set(x.get(), i, x0[i]);
    gsl_vector_set(ss.get(), i, step[i]);
  }
  std::unique_ptr<gsl_multimin_fminimizer, SimplexFree> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, p));
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());

  SimplexResult out;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && out.iterations < max_iter) {
    ++out.iterations;
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol);
  }
  out.converged = status == GSL_SUCCESS;
  out.x.assign(s->x->data, s->x->data + p);
  out.value = s->fval;
  return out;
}

}  // namespace revival::detail
