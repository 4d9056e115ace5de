#include "lrfr/model.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "lrfr/eval.hpp"

namespace lrfr {

Vector eval_beta(const CoefficientFunctions& cf, Index j, double t) {
  cf.validate();
  if (j < 1 || j > cf.M.s)
    throw validation_error("eval_beta: covariate index out of range");
  return cf.M.block(j) * basis_vector(cf.basis, t);
}

Matrix beta_on_grid(const CoefficientFunctions& cf, Index j, const TimeGrid& grid) {
  cf.validate();
  if (j < 1 || j > cf.M.s)
    throw validation_error("beta_on_grid: covariate index out of range");
  return cf.M.block(j) * basis_matrix(cf.basis, grid).values;
}

Matrix predict(const CoefficientFunctions& cf, const Vector& x_new,
               const TimeGrid& grid) {
  cf.validate();
  if (x_new.size() != cf.M.s)
    throw validation_error("predict: covariate vector length mismatch");
  const BasisMatrix B = basis_matrix(cf.basis, grid);
  return cf.M.M * subject_design(x_new, B);
}

int effective_rank(const CoefMatrix& M, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw validation_error("effective_rank: rel_tol must lie in (0,1)");
  Eigen::BDCSVD<Matrix> svd(M.M);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return static_cast<int>((sv.array() > rel_tol * sv(0)).count());
}

std::vector<double> scree(const CoefMatrix& M, int k) {
  if (k < 1) throw validation_error("scree: k must be >= 1");
  Eigen::BDCSVD<Matrix> svd(M.M);
  const Vector& sv = svd.singularValues();
  std::vector<double> out(static_cast<size_t>(k), 0.0);
  for (int i = 0; i < k && i < sv.size(); ++i) out[static_cast<size_t>(i)] = sv(i);
  return out;
}

Matrix standardized_beta_on_grid(const CoefficientFunctions& cf, Index j,
                                 const TimeGrid& grid) {
  constexpr int kQuadPoints = 1024;
  const TimeGrid quad = TimeGrid::uniform_closed(kQuadPoints);
  const Matrix on_quad = beta_on_grid(cf, j, quad);
  Matrix out = beta_on_grid(cf, j, grid);
  for (Index l = 0; l < out.rows(); ++l) {
    const double mean = quadrature_integral(on_quad.row(l).transpose());
    const Vector centered_sq =
        (on_quad.row(l).array() - mean).square().matrix().transpose();
    const double sd = std::sqrt(quadrature_integral(centered_sq));
    if (sd > 0.0)
      out.row(l) = (out.row(l).array() - mean) / sd;
    else
      out.row(l).setZero();
  }
  return out;
}

}  // namespace lrfr
