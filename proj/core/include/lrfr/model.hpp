#pragma once

#include <vector>

#include "lrfr/basis.hpp"
#include "lrfr/coef_matrix.hpp"
#include "lrfr/design.hpp"

namespace lrfr {

/// Fitted (or true) coefficient functions beta_jl(t) = sum_h M_jl,h b_h(t),
/// bound to the basis family and truncation they were estimated with.
struct CoefficientFunctions {
  CoefMatrix M;
  BasisSpec basis;

  void validate() const {
    M.validate();
    if (basis.c != M.c)
      throw validation_error("CoefficientFunctions: basis truncation differs from M");
  }
};

/// beta_j(t) = M_j b(t) in R^p, 1-based covariate index.
Vector eval_beta(const CoefficientFunctions& cf, Index j, double t);

/// All curves of covariate j sampled on a grid: M_j B, p x T.
Matrix beta_on_grid(const CoefficientFunctions& cf, Index j, const TimeGrid& grid);

/// Zero-error prediction M (x_new (x) B(grid)), p x T.
Matrix predict(const CoefficientFunctions& cf, const Vector& x_new, const TimeGrid& grid);

/// Number of singular values above rel_tol * sigma_max; 0 for the zero matrix.
int effective_rank(const CoefMatrix& M, double rel_tol = 1e-7);

/// Top-k singular values, descending, zero-padded past min(p, sc).
std::vector<double> scree(const CoefMatrix& M, int k);

/// Per-curve standardization {beta - int beta} / [int {beta - int beta}^2]^{1/2},
/// sampled on `grid`; integrals use the trapezoid rule on that grid. Curves
/// with zero variation standardize to zero.
Matrix standardized_beta_on_grid(const CoefficientFunctions& cf, Index j,
                                 const TimeGrid& grid);

}  // namespace lrfr
