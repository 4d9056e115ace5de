#pragma once

#include <vector>

#include "lrfr/basis.hpp"
#include "lrfr/coef_matrix.hpp"
#include "lrfr/common.hpp"

namespace lrfr {

/// Covariates x_i (rows of `covariates`) and per-subject response curves
/// Y_i in R^{p x T}, all observed on one shared grid. Centering and
/// standardization are the caller's responsibility (see standardize_dataset).
struct Dataset {
  Matrix covariates;             // n x s
  std::vector<Matrix> responses; // n matrices, each p x T
  TimeGrid grid;

  Index n() const { return covariates.rows(); }
  Index s() const { return covariates.cols(); }
  Index p() const { return responses.empty() ? 0 : responses.front().rows(); }
  Index T() const { return grid.size(); }

  void validate() const;
};

struct SystemDims {
  Index n = 0, s = 0, p = 0, T = 0;
  int c = 0;
  Index rows() const { return n * T; }
  Index sc() const { return s * c; }
};

/// Row-stacked regression system: X row-block i is (x_i (x) B)^T, Y row-block
/// i is Y_i^T. Pure reshaping of the dataset against one basis.
struct StackedSystem {
  Matrix X;  // (nT) x (sc)
  Matrix Y;  // (nT) x p
  SystemDims dims;
};

/// X_i = x_i (x) B; block j (rows (j-1)c+1..jc) equals x_ij * B.
Matrix subject_design(const Vector& x_i, const BasisMatrix& B);

StackedSystem stack_system(const Dataset& data, const BasisMatrix& B);

/// Inverse of stack_system's reshaping for one subject (1-based i).
Matrix unstack_response(const StackedSystem& sys, Index i);
Matrix unstack_design(const StackedSystem& sys, Index i);

/// M X_i, the fitted p x T response surface for one subject design.
Matrix model_product(const CoefMatrix& M, const Matrix& X_i);

/// Per-response standardization (zero mean, unit sd over all (i,k)) and
/// covariate centering, applied in place.
void standardize_dataset(Dataset& data);

}  // namespace lrfr
