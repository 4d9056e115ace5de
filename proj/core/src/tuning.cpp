#include "lrfr/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "lrfr/parallel.hpp"

namespace lrfr {

namespace {

Dataset subset_dataset(const Dataset& data, const std::vector<Index>& rows) {
  Dataset out{Matrix(static_cast<Index>(rows.size()), data.s()), {}, data.grid};
  out.responses.reserve(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    out.covariates.row(static_cast<Index>(r)) = data.covariates.row(rows[r]);
    out.responses.push_back(data.responses[static_cast<size_t>(rows[r])]);
  }
  return out;
}

void check_folds(const std::vector<int>& folds, Index n, int k) {
  if (static_cast<Index>(folds.size()) != n)
    throw validation_error("cv: fold assignment length must equal n");
  for (int f : folds)
    if (f < 0 || f >= k) throw validation_error("cv: fold label out of range");
}

// Held-out scores for one (c, fold): fits the training complement along the
// descending lambda ladder with warm starts and scores each solution on the
// held-out subjects. Returns one score per lambda.
std::vector<double> fold_lambda_scores(const Dataset& data, int c,
                                       const std::vector<double>& lambdas,
                                       const std::vector<int>& folds, int fold,
                                       BasisFamily family, const SolverOptions& opts) {
  std::vector<Index> train_rows, hold_rows;
  for (Index i = 0; i < data.n(); ++i)
    (folds[static_cast<size_t>(i)] == fold ? hold_rows : train_rows).push_back(i);
  if (train_rows.empty() || hold_rows.empty())
    throw validation_error("cv: a fold has an empty train or hold-out side");

  const BasisMatrix B = basis_matrix(BasisSpec{family, c}, data.grid);
  const GramSystem gram = GramSystem::from(stack_system(subset_dataset(data, train_rows), B));

  const Dataset hold = subset_dataset(data, hold_rows);
  const StackedSystem hold_sys = stack_system(hold, B);
  const double hold_scale =
      static_cast<double>(hold_sys.dims.n) * static_cast<double>(hold_sys.dims.T);

  std::vector<double> scores;
  scores.reserve(lambdas.size());
  CoefMatrix warm;
  bool have_warm = false;
  for (double lambda : lambdas) {
    FitResult fit;
    try {
      fit = fit_fista(gram, lambda, opts, have_warm ? &warm : nullptr);
    } catch (const numeric_error& e) {
      throw numeric_error("cv fold " + std::to_string(fold) + ": " + e.what());
    }
    warm = fit.M_hat;
    have_warm = true;
    const double resid =
        (hold_sys.Y - hold_sys.X * fit.M_hat.M.transpose()).squaredNorm();
    scores.push_back(resid / hold_scale);
  }
  return scores;
}

}  // namespace

void CVGrid::validate() const {
  if (c_values.empty() || lambda_values.empty())
    throw validation_error("CVGrid: c and lambda grids must be non-empty");
  if (k_folds < 2) throw validation_error("CVGrid: k_folds must be >= 2");
  if (!std::is_sorted(c_values.begin(), c_values.end()))
    throw validation_error("CVGrid: c_values must be sorted ascending");
  for (int c : c_values)
    if (c < 1) throw validation_error("CVGrid: c values must be positive");
  if (!std::is_sorted(lambda_values.begin(), lambda_values.end(),
                      std::greater<double>()))
    throw validation_error("CVGrid: lambda_values must be sorted descending");
  for (double l : lambda_values)
    if (l < 0) throw validation_error("CVGrid: lambda values must be >= 0");
}

std::vector<int> make_folds(Index n, int k, std::uint64_t seed) {
  if (k < 1) throw validation_error("make_folds: k must be >= 1");
  if (static_cast<Index>(k) > n)
    throw validation_error("make_folds: k must not exceed n");
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  // explicit Fisher-Yates so the assignment is reproducible across platforms
  std::mt19937_64 rng(seed);
  for (Index i = n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  }
  std::vector<int> folds(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    folds[static_cast<size_t>(perm[static_cast<size_t>(i)])] =
        static_cast<int>(i % static_cast<Index>(k));
  return folds;
}

double cv_score(const Dataset& data, int c, double lambda,
                const std::vector<int>& folds, BasisFamily family,
                const SolverOptions& opts) {
  data.validate();
  if (c < 1) throw validation_error("cv_score: c must be >= 1");
  if (lambda < 0) throw validation_error("cv_score: lambda must be >= 0");
  const int k = folds.empty() ? 0 : *std::max_element(folds.begin(), folds.end()) + 1;
  check_folds(folds, data.n(), k);
  const std::vector<double> lambdas{lambda};
  double acc = 0.0;
  for (int f = 0; f < k; ++f)
    acc += fold_lambda_scores(data, c, lambdas, folds, f, family, opts)[0];
  return acc / static_cast<double>(k);
}

CVResult grid_search(const Dataset& data, const CVGrid& grid, BasisFamily family,
                     const SolverOptions& opts, int threads) {
  data.validate();
  grid.validate();
  const std::vector<int> folds = make_folds(data.n(), grid.k_folds, grid.seed);

  const Index n_c = static_cast<Index>(grid.c_values.size());
  const Index n_lambda = static_cast<Index>(grid.lambda_values.size());
  const Index n_cells = n_c * static_cast<Index>(grid.k_folds);

  // one work item per (c, fold); each owns its lambda chain
  std::vector<std::vector<double>> cell_scores(static_cast<size_t>(n_cells));
  run_indexed(n_cells, threads, [&](Index cell) {
    const int ci = static_cast<int>(cell / grid.k_folds);
    const int fold = static_cast<int>(cell % grid.k_folds);
    cell_scores[static_cast<size_t>(cell)] = fold_lambda_scores(
        data, grid.c_values[static_cast<size_t>(ci)], grid.lambda_values, folds,
        fold, family, opts);
  });

  CVResult result;
  result.score_table = Matrix::Zero(n_c, n_lambda);
  for (Index ci = 0; ci < n_c; ++ci) {
    for (int fold = 0; fold < grid.k_folds; ++fold) {
      const auto& scores = cell_scores[static_cast<size_t>(ci * grid.k_folds + fold)];
      for (Index li = 0; li < n_lambda; ++li)
        result.score_table(ci, li) += scores[static_cast<size_t>(li)];
    }
  }
  result.score_table /= static_cast<double>(grid.k_folds);

  // strict < keeps the first optimum: smallest c, then largest lambda
  Index best_ci = 0, best_li = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Index ci = 0; ci < n_c; ++ci)
    for (Index li = 0; li < n_lambda; ++li)
      if (result.score_table(ci, li) < best) {
        best = result.score_table(ci, li);
        best_ci = ci;
        best_li = li;
      }
  result.best_c = grid.c_values[static_cast<size_t>(best_ci)];
  result.best_lambda = grid.lambda_values[static_cast<size_t>(best_li)];
  result.fold_assignment = folds;
  return result;
}

std::vector<double> lambda_ladder_from(double lambda_max, int n_values,
                                       double min_ratio) {
  if (!(lambda_max > 0)) throw validation_error("lambda ladder: lambda_max must be > 0");
  if (n_values < 1) throw validation_error("lambda ladder: need >= 1 values");
  if (!(min_ratio > 0 && min_ratio <= 1))
    throw validation_error("lambda ladder: min_ratio must lie in (0,1]");
  std::vector<double> ladder(static_cast<size_t>(n_values));
  if (n_values == 1) {
    ladder[0] = lambda_max;
    return ladder;
  }
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(lambda_max * min_ratio);
  for (int i = 0; i < n_values; ++i)
    ladder[static_cast<size_t>(i)] =
        std::exp(log_max + (log_min - log_max) * i / (n_values - 1));
  return ladder;
}

std::vector<double> default_lambda_ladder(const Dataset& data, int c,
                                          BasisFamily family, int n_values,
                                          double min_ratio) {
  const BasisMatrix B = basis_matrix(BasisSpec{family, c}, data.grid);
  const double dead = lambda_dead(stack_system(data, B));
  return lambda_ladder_from(dead, n_values, min_ratio);
}

}  // namespace lrfr
