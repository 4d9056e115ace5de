#pragma once

#include <cstdint>
#include <vector>

#include "lrfr/design.hpp"
#include "lrfr/solver.hpp"

namespace lrfr {

struct CVGrid {
  std::vector<int> c_values;         // ascending
  std::vector<double> lambda_values; // descending (warm-start order)
  int k_folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CVResult {
  int best_c = 0;
  double best_lambda = 0.0;
  Matrix score_table;  // |c_values| x |lambda_values|, mean held-out loss
  std::vector<int> fold_assignment;
};

/// Partitions subjects 0..n-1 into k folds whose sizes differ by at most
/// one, via a seeded Fisher-Yates shuffle. Deterministic per seed.
std::vector<int> make_folds(Index n, int k, std::uint64_t seed);

/// Mean over folds of (1/(n_hold * T)) sum_{i in hold} ||Y_i - M_hat X_i||_F^2,
/// fitting on the complement with the given (c, lambda). Folds split by
/// subject; the penalty is excluded from the held-out score.
double cv_score(const Dataset& data, int c, double lambda,
                const std::vector<int>& folds, BasisFamily family,
                const SolverOptions& opts = {});

/// Full Cartesian (c, lambda) search. Within each (c, fold) the lambda
/// ladder is descended with warm starts. Ties break toward the smallest c,
/// then the largest lambda. (c, fold) cells are independent work items;
/// the score table is identical for any thread count.
CVResult grid_search(const Dataset& data, const CVGrid& grid, BasisFamily family,
                     const SolverOptions& opts = {}, int threads = 1);

/// n log-spaced values from lambda_dead(full data at c) down to
/// min_ratio * lambda_dead, descending.
std::vector<double> default_lambda_ladder(const Dataset& data, int c,
                                          BasisFamily family, int n_values = 20,
                                          double min_ratio = 1e-4);
std::vector<double> lambda_ladder_from(double lambda_max, int n_values = 20,
                                       double min_ratio = 1e-4);

}  // namespace lrfr
