#pragma once

#include <vector>

#include "lrfr/model.hpp"

namespace lrfr {

struct MiseReport {
  std::vector<double> per_j;  // MISE_j, length s
  int quadrature_points = 0;
};

/// Composite trapezoid rule for samples of f on a uniform grid spanning [0,1].
double quadrature_integral(const Vector& samples);

/// MISE_j = (1/p) sum_l int_0^1 (beta_jl - beta_hat_jl)^2 dt, integrated by
/// the trapezoid rule on n_quad uniform points. The two expansions may use
/// different bases; both are evaluated pointwise on the quadrature grid.
MiseReport mise(const CoefficientFunctions& beta_true,
                const CoefficientFunctions& beta_hat, int n_quad = 1024);

}  // namespace lrfr
