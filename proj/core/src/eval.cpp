#include "lrfr/eval.hpp"

namespace lrfr {

double quadrature_integral(const Vector& samples) {
  const Index n = samples.size();
  if (n < 2) throw validation_error("quadrature_integral: need >= 2 samples");
  const double h = 1.0 / static_cast<double>(n - 1);
  return h * (samples.sum() - 0.5 * (samples(0) + samples(n - 1)));
}

MiseReport mise(const CoefficientFunctions& beta_true,
                const CoefficientFunctions& beta_hat, int n_quad) {
  beta_true.validate();
  beta_hat.validate();
  if (n_quad < 2) throw validation_error("mise: n_quad must be >= 2");
  if (beta_true.M.s != beta_hat.M.s || beta_true.M.p() != beta_hat.M.p())
    throw validation_error("mise: coefficient dimensions (s, p) must match");

  const Index s = beta_true.M.s;
  const Index p = beta_true.M.p();
  const TimeGrid quad = TimeGrid::uniform_closed(n_quad);

  MiseReport report;
  report.quadrature_points = n_quad;
  report.per_j.resize(static_cast<size_t>(s));
  for (Index j = 1; j <= s; ++j) {
    const Matrix diff = beta_on_grid(beta_true, j, quad) - beta_on_grid(beta_hat, j, quad);
    double acc = 0.0;
    for (Index l = 0; l < p; ++l)
      acc += quadrature_integral(diff.row(l).array().square().matrix().transpose());
    report.per_j[static_cast<size_t>(j - 1)] = acc / static_cast<double>(p);
  }
  return report;
}

}  // namespace lrfr
