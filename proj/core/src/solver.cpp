#include "lrfr/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace lrfr {

namespace {

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& A) {
  return Eigen::BDCSVD<Matrix>(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

std::vector<double> singular_values_of(const Matrix& A) {
  Eigen::BDCSVD<Matrix> svd(A);
  const Vector& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

double nuclear_norm(const Matrix& A) {
  Eigen::BDCSVD<Matrix> svd(A);
  return svd.singularValues().sum();
}

// Largest eigenvalue of the symmetric PSD matrix G by power iteration.
double power_iteration_lambda_max(const Matrix& G, double rel_tol, int max_iters) {
  const Index k = G.rows();
  Vector v = Vector::Ones(k) / std::sqrt(static_cast<double>(k));
  Vector Gv = G * v;
  if (Gv.norm() == 0.0) {
    // ones happened to lie in the kernel; probe the canonical directions
    for (Index j = 0; j < k && Gv.norm() == 0.0; ++j) {
      v = Vector::Unit(k, j);
      Gv = G * v;
    }
    if (Gv.norm() == 0.0) throw numeric_error("power iteration: zero matrix");
  }
  double lambda = v.dot(Gv);
  for (int it = 0; it < max_iters; ++it) {
    v = Gv / Gv.norm();
    Gv = G * v;
    const double next = v.dot(Gv);
    if (std::abs(next - lambda) <= rel_tol * std::max(std::abs(next), 1e-300)) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

struct FistaCore {
  const GramSystem& gram;
  double lambda;
  double inv_nT;  // 1 / (nT)

  // Q(D) under the (1/2nT) scaling, smooth part in Gram form.
  double objective_at(const Matrix& D, double nuclear) const {
    const double quad = (gram.G * D).cwiseProduct(D).sum();
    const double smooth =
        0.5 * inv_nT * (gram.y_sqnorm - 2.0 * D.cwiseProduct(gram.C).sum() + quad);
    return smooth + lambda * nuclear;
  }
};

}  // namespace

GramSystem GramSystem::from(const StackedSystem& sys) {
  GramSystem g;
  g.G = sys.X.transpose() * sys.X;
  g.C = sys.X.transpose() * sys.Y;
  g.y_sqnorm = sys.Y.squaredNorm();
  g.dims = sys.dims;
  return g;
}

double objective(const CoefMatrix& M, const StackedSystem& sys, double lambda) {
  if (lambda < 0) throw validation_error("objective: lambda must be >= 0");
  M.validate();
  if (M.sc() != sys.X.cols() || M.p() != sys.Y.cols())
    throw validation_error("objective: coefficient/system dimension mismatch");
  const double nT = static_cast<double>(sys.X.rows());
  const double resid = (sys.Y - sys.X * M.M.transpose()).squaredNorm();
  return resid / (2.0 * nT) + lambda * nuclear_norm(M.M);
}

Matrix smooth_gradient(const Matrix& D, const StackedSystem& sys) {
  if (D.rows() != sys.X.cols() || D.cols() != sys.Y.cols())
    throw validation_error("smooth_gradient: dimension mismatch");
  const double nT = static_cast<double>(sys.X.rows());
  return sys.X.transpose() * (sys.X * D - sys.Y) / nT;
}

Matrix svd_soft_threshold(const Matrix& A, double tau) {
  if (tau < 0) throw validation_error("svd_soft_threshold: tau must be >= 0");
  auto svd = thin_svd(A);
  Vector d = (svd.singularValues().array() - tau).max(0.0);
  return svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
}

double step_size(const GramSystem& gram) {
  if (gram.G.cwiseAbs().maxCoeff() == 0.0)
    throw validation_error("step_size: all-zero design");
  const double lam_max = power_iteration_lambda_max(gram.G, 1e-8, 100000);
  return static_cast<double>(gram.dims.rows()) / lam_max;
}

double step_size(const StackedSystem& sys) { return step_size(GramSystem::from(sys)); }

double lambda_dead(const GramSystem& gram) {
  Eigen::BDCSVD<Matrix> svd(gram.C);
  return svd.singularValues()(0) / static_cast<double>(gram.dims.rows());
}

double lambda_dead(const StackedSystem& sys) {
  return lambda_dead(GramSystem::from(sys));
}

FitResult fit_fista(const GramSystem& gram, double lambda, const SolverOptions& opts,
                    const CoefMatrix* warm_start) {
  if (lambda < 0) throw validation_error("fit_fista: lambda must be >= 0");
  opts.validate();
  const Index sc = gram.G.rows();
  const Index p = gram.C.cols();
  const double nT = static_cast<double>(gram.dims.rows());
  FistaCore core{gram, lambda, 1.0 / nT};

  Matrix D = Matrix::Zero(sc, p);
  if (warm_start != nullptr) {
    warm_start->validate();
    if (warm_start->sc() != sc || warm_start->p() != p)
      throw validation_error("fit_fista: warm start dimension mismatch");
    D = warm_start->M.transpose();
  }
  Matrix D_prev = D;

  const double delta = step_size(gram);
  const double threshold = lambda * delta;

  double alpha_prev = 0.0;  // alpha^(0)
  double alpha_cur = 1.0;   // alpha^(1)

  FitResult result;
  result.lambda_used = lambda;
  double q = core.objective_at(D, nuclear_norm(D));
  result.objective_trace.push_back(q);

  for (int t = 1; t <= opts.max_iters; ++t) {
    const double momentum = (alpha_prev - 1.0) / alpha_cur;
    Matrix S = D + momentum * (D - D_prev);
    Matrix A = S - delta * core.inv_nT * (gram.G * S - gram.C);

    Matrix D_next;
    double nuclear;
    if (threshold > 0.0) {
      auto svd = thin_svd(A);
      Vector d = (svd.singularValues().array() - threshold).max(0.0);
      D_next = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
      nuclear = d.sum();
    } else {
      D_next = std::move(A);
      nuclear = lambda > 0.0 ? nuclear_norm(D_next) : 0.0;
    }

    const double q_next = core.objective_at(D_next, nuclear);
    if (!std::isfinite(q_next))
      throw numeric_error("fit_fista: non-finite objective (step size/scaling bug)");
    result.objective_trace.push_back(q_next);
    result.iterations = t;

    D_prev = std::move(D);
    D = std::move(D_next);
    alpha_prev = alpha_cur;
    alpha_cur = (1.0 + std::sqrt(1.0 + 4.0 * alpha_cur * alpha_cur)) / 2.0;

    const double rel = std::abs(q_next - q) / std::max(1.0, std::abs(q));
    q = q_next;
    if (t >= opts.min_iters && rel < opts.rel_tol) {
      result.converged = true;
      break;
    }
  }

  result.M_hat = CoefMatrix{D.transpose(), gram.dims.s, gram.dims.c};
  result.singular_values = singular_values_of(D);
  return result;
}

FitResult fit_fista(const StackedSystem& sys, double lambda, const SolverOptions& opts,
                    const CoefMatrix* warm_start) {
  return fit_fista(GramSystem::from(sys), lambda, opts, warm_start);
}

FitResult fit_ols(const GramSystem& gram, double ridge) {
  if (ridge < 0) throw validation_error("fit_ols: ridge must be >= 0");
  Matrix G = gram.G;
  if (ridge > 0) G.diagonal().array() += ridge;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(G, Eigen::EigenvaluesOnly);
  const double ev_min = eig.eigenvalues().minCoeff();
  const double ev_max = eig.eigenvalues().maxCoeff();
  if (!(ev_min > 0.0) || ev_max / ev_min > 1e12)
    throw numeric_error(
        "fit_ols: X^T X is numerically rank-deficient; rerun with a positive "
        "--ridge value to regularize the normal equations");

  Matrix D = G.ldlt().solve(gram.C);

  FitResult result;
  result.M_hat = CoefMatrix{D.transpose(), gram.dims.s, gram.dims.c};
  result.lambda_used = 0.0;
  result.iterations = 1;
  result.converged = true;
  result.singular_values = singular_values_of(D);
  // reported objective is the unridged lambda = 0 loss at the solution
  const double nT = static_cast<double>(gram.dims.rows());
  const double smooth =
      0.5 / nT * (gram.y_sqnorm - 2.0 * D.cwiseProduct(gram.C).sum() +
                  (gram.G * D).cwiseProduct(D).sum());
  result.objective_trace.push_back(smooth);
  return result;
}

FitResult fit_ols(const StackedSystem& sys, double ridge) {
  return fit_ols(GramSystem::from(sys), ridge);
}

}  // namespace lrfr
