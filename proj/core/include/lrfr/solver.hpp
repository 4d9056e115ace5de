#pragma once

#include <vector>

#include "lrfr/coef_matrix.hpp"
#include "lrfr/design.hpp"

namespace lrfr {

struct SolverOptions {
  int max_iters = 10000;
  double rel_tol = 1e-8;  // relative objective-change stopping threshold
  int min_iters = 10;

  void validate() const {
    if (max_iters < 1) throw validation_error("SolverOptions: max_iters must be >= 1");
    if (!(rel_tol > 0)) throw validation_error("SolverOptions: rel_tol must be > 0");
    if (min_iters < 0) throw validation_error("SolverOptions: min_iters must be >= 0");
  }
};

struct FitResult {
  CoefMatrix M_hat;
  std::vector<double> objective_trace;  // Q at each iterate, last = Q(M_hat)
  int iterations = 0;
  std::vector<double> singular_values;  // of M_hat, descending
  double lambda_used = 0.0;
  bool converged = false;
};

/// Precomputed normal-equation blocks X^T X, X^T Y and ||Y||_F^2. The
/// stacked system has nT >> sc at the scales of interest, so every solver
/// pass works off these sc-sized blocks.
struct GramSystem {
  Matrix G;         // X^T X, sc x sc
  Matrix C;         // X^T Y, sc x p
  double y_sqnorm = 0.0;
  SystemDims dims;

  static GramSystem from(const StackedSystem& sys);
};

/// Penalized objective (1/2nT) ||Y - X M^T||_F^2 + lambda ||M^T||_*,
/// with the nuclear norm computed from a full SVD.
double objective(const CoefMatrix& M, const StackedSystem& sys, double lambda);

/// Gradient of the smooth part at D = M^T: (1/nT) X^T (X D - Y).
Matrix smooth_gradient(const Matrix& D, const StackedSystem& sys);

/// Proximal operator of tau ||.||_*: soft-thresholds the singular values.
Matrix svd_soft_threshold(const Matrix& A, double tau);

/// Fixed step nT / lambda_max(X^T X); the spectral norm comes from power
/// iteration on the Gram matrix (relative tolerance 1e-8).
double step_size(const StackedSystem& sys);
double step_size(const GramSystem& gram);

/// Smallest lambda at which the zero matrix is optimal:
/// (1/nT) sigma_max(X^T Y).
double lambda_dead(const StackedSystem& sys);
double lambda_dead(const GramSystem& gram);

/// Accelerated proximal gradient (Nesterov momentum) on D = M^T with
/// singular-value soft-thresholding. Stops once the relative objective
/// change drops below opts.rel_tol (after opts.min_iters) or at max_iters.
FitResult fit_fista(const StackedSystem& sys, double lambda,
                    const SolverOptions& opts = {},
                    const CoefMatrix* warm_start = nullptr);
FitResult fit_fista(const GramSystem& gram, double lambda,
                    const SolverOptions& opts = {},
                    const CoefMatrix* warm_start = nullptr);

/// Closed-form least squares via the normal equations (lambda = 0 baseline).
/// `ridge` > 0 adds ridge*I to X^T X for rank-deficient designs.
FitResult fit_ols(const StackedSystem& sys, double ridge = 0.0);
FitResult fit_ols(const GramSystem& gram, double ridge = 0.0);

}  // namespace lrfr
