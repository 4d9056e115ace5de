#include "lrfr/design.hpp"

#include <cmath>

namespace lrfr {

void Dataset::validate() const {
  if (covariates.rows() == 0 || covariates.cols() == 0)
    throw validation_error("Dataset: empty covariate matrix");
  if (static_cast<Index>(responses.size()) != covariates.rows())
    throw validation_error("Dataset: response count must equal covariate rows");
  const Index p_ = responses.front().rows();
  for (const Matrix& Yi : responses) {
    if (Yi.rows() != p_ || Yi.cols() != grid.size())
      throw validation_error("Dataset: inconsistent response dimensions");
    if (!Yi.allFinite()) throw validation_error("Dataset: non-finite response value");
  }
  if (!covariates.allFinite())
    throw validation_error("Dataset: non-finite covariate value");
}

Matrix subject_design(const Vector& x_i, const BasisMatrix& B) {
  const Index s = x_i.size();
  if (s == 0) throw validation_error("subject_design: empty covariate vector");
  const Index c = B.c();
  const Index T = B.T();
  Matrix X(s * c, T);
  for (Index j = 0; j < s; ++j) X.middleRows(j * c, c) = x_i[j] * B.values;
  return X;
}

StackedSystem stack_system(const Dataset& data, const BasisMatrix& B) {
  data.validate();
  if (!(data.grid == B.grid))
    throw validation_error("stack_system: dataset and basis grids differ");
  const Index n = data.n(), s = data.s(), p = data.p(), T = data.T();
  const int c = static_cast<int>(B.c());
  StackedSystem sys;
  sys.dims = SystemDims{n, s, p, T, c};
  sys.X.resize(n * T, s * c);
  sys.Y.resize(n * T, p);
  for (Index i = 0; i < n; ++i) {
    sys.X.middleRows(i * T, T) = subject_design(data.covariates.row(i), B).transpose();
    sys.Y.middleRows(i * T, T) = data.responses[i].transpose();
  }
  return sys;
}

Matrix unstack_response(const StackedSystem& sys, Index i) {
  if (i < 1 || i > sys.dims.n)
    throw validation_error("unstack_response: subject index out of range");
  return sys.Y.middleRows((i - 1) * sys.dims.T, sys.dims.T).transpose();
}

Matrix unstack_design(const StackedSystem& sys, Index i) {
  if (i < 1 || i > sys.dims.n)
    throw validation_error("unstack_design: subject index out of range");
  return sys.X.middleRows((i - 1) * sys.dims.T, sys.dims.T).transpose();
}

Matrix model_product(const CoefMatrix& M, const Matrix& X_i) {
  M.validate();
  if (M.sc() != X_i.rows())
    throw validation_error("model_product: coefficient/design dimension mismatch");
  return M.M * X_i;
}

void standardize_dataset(Dataset& data) {
  data.validate();
  const Index n = data.n(), s = data.s(), p = data.p(), T = data.T();
  for (Index j = 0; j < s; ++j)
    data.covariates.col(j).array() -= data.covariates.col(j).mean();
  const double count = static_cast<double>(n * T);
  for (Index l = 0; l < p; ++l) {
    double mean = 0.0;
    for (Index i = 0; i < n; ++i) mean += data.responses[i].row(l).sum();
    mean /= count;
    double ss = 0.0;
    for (Index i = 0; i < n; ++i)
      ss += (data.responses[i].row(l).array() - mean).square().sum();
    const double sd = std::sqrt(ss / count);
    if (sd <= 0.0)
      throw validation_error("standardize_dataset: constant response coordinate");
    for (Index i = 0; i < n; ++i)
      data.responses[i].row(l) = (data.responses[i].row(l).array() - mean) / sd;
  }
}

}  // namespace lrfr
