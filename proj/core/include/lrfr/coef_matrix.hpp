#pragma once

#include "lrfr/common.hpp"

namespace lrfr {

/// Stacked coefficient matrix M in R^{p x sc}; columns group into s blocks
/// of width c, block j holding the coefficients of covariate j.
struct CoefMatrix {
  Matrix M;  // p x (s*c)
  Index s = 0;
  int c = 0;

  Index p() const { return M.rows(); }
  Index sc() const { return M.cols(); }

  static CoefMatrix zero(Index p, Index s, int c) {
    return CoefMatrix{Matrix::Zero(p, s * c), s, c};
  }

  /// M_j in R^{p x c}, 1-based j.
  auto block(Index j) const {
    check_block(j);
    return M.middleCols((j - 1) * c, c);
  }
  auto block(Index j) {
    check_block(j);
    return M.middleCols((j - 1) * c, c);
  }

  void validate() const {
    if (s < 1 || c < 1 || M.cols() != s * c)
      throw validation_error("CoefMatrix: columns must equal s*c");
  }

 private:
  void check_block(Index j) const {
    if (j < 1 || j > s) throw validation_error("CoefMatrix: covariate index out of range");
  }
};

}  // namespace lrfr
