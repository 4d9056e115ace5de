#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lrfr/design.hpp"
#include "lrfr/model.hpp"
#include "lrfr/solver.hpp"

namespace lrfr {

enum class Shape { Square, TShape, Cross, Custom };

Shape shape_from_string(const std::string& name);
std::string to_string(Shape shape);

/// Generative design: defaults reproduce the canonical
/// (n, p, T, c, s) = (100, 32, 256, 4, 8) configuration.
struct SimConfig {
  Index n = 100;
  Index p = 32;
  Index T = 256;
  int c_true = 4;
  Index s = 8;
  Shape shape = Shape::Square;
  Matrix custom_M;  // used when shape == Custom
  double snr = 5.0; // +inf means noiseless (nu = 0)
  BasisFamily true_family = BasisFamily::Fourier;
  double ar_coef = 0.3;
  double cov_decay = 0.5;
  std::uint64_t seed = 0;
  // per-basis weights for the many-basis variant; empty = plain glyph truth
  std::vector<double> spectral_weights;

  void validate() const;
};

struct GroundTruth {
  CoefMatrix M_star;
  double nu = 0.0;
  CoefficientFunctions beta_true;
};

/// i.i.d. rows from N(0, Sigma) with Sigma_{j1 j2} = decay^{|j1-j2|},
/// sampled through the Cholesky factor of Sigma.
Matrix gen_covariates(Index n, Index s, double decay, std::uint64_t seed);

/// Per-(subject, response) AR(1) recursion e_k = ar e_{k-1} + eps_k with
/// e_0 = 0 and standard normal innovations; returns n matrices p x T.
std::vector<Matrix> gen_ar1_errors(Index n, Index p, Index T, double ar_coef,
                                   std::uint64_t seed);
/// The same recursion applied to caller-supplied innovations (test hook).
Matrix ar1_filter(const Matrix& innovations, double ar_coef);

/// Binary glyph for the named coefficient shapes on the canonical 32 x 32
/// grid; other sizes must go through Shape::Custom.
Matrix make_shape_M(Shape shape, Index p, Index sc);

/// nu = sqrt( sum_i ||M* X_i||_F^2 / (target_snr * sum_i ||E_i||_F^2) ), so
/// the realized ratio of signal to scaled-noise energy equals target_snr.
double calibrate_nu(const CoefMatrix& M_star, const std::vector<Matrix>& X_designs,
                    const std::vector<Matrix>& E_raw, double target_snr);

/// Signal/noise energy ratio of a realized dataset decomposition.
double realized_snr(const CoefMatrix& M_star, const std::vector<Matrix>& X_designs,
                    double nu, const std::vector<Matrix>& E_raw);

/// Re-evaluates the SNR of a generated dataset from scratch:
/// sum ||M* X_i||_F^2 / sum ||Y_i - M* X_i||_F^2 (+inf when noiseless).
double realized_snr_of(const Dataset& data, const GroundTruth& truth);

/// Y_i = M* X_i + nu E_i on the uniform grid t_k = (k-1)/T, with nu
/// calibrated to cfg.snr. Fully determined by cfg.seed.
std::pair<Dataset, GroundTruth> gen_dataset(const SimConfig& cfg);

/// omega_1..4 = (1, 0.8, 0.6, 0.5), omega_h = 8 (h-2)^{-4} for h >= 5.
std::vector<double> default_spectral_weights(int c_true);

// --- Monte Carlo driver ----------------------------------------------------

struct FitPlan {
  enum class Kind { CV2D, FixedCCVLambda, Fixed };
  Kind kind = Kind::FixedCCVLambda;
  BasisFamily fitted_family = BasisFamily::Fourier;
  std::vector<int> c_values;          // CV2D grid
  int c_fixed = 4;                    // FixedCCVLambda / Fixed
  double lambda_fixed = 0.0;          // Fixed
  std::vector<double> lambda_values;  // empty = default ladder
  int n_lambda = 20;
  double lambda_min_ratio = 1e-4;
  int k_folds = 5;
  int n_quad = 1024;
  SolverOptions solver;

  void validate() const;
};

struct MCRunRecord {
  std::vector<double> sieve_mise;  // per j
  std::vector<double> ols_mise;    // per j
  int selected_c = 0;
  double selected_lambda = 0.0;
  int rank = 0;
  std::uint64_t seed = 0;
};

struct MCReport {
  int n_runs = 0;
  Index s = 0;
  bool se_defined = false;  // false when n_runs == 1 (SEs reported as 0)
  std::vector<double> sieve_mise_mean, sieve_mise_se;
  std::vector<double> ols_mise_mean, ols_mise_se;
  double mean_selected_c = 0.0, se_selected_c = 0.0;
  double mean_rank = 0.0, se_rank = 0.0;
  std::vector<MCRunRecord> runs;
};

/// Runs n_runs independent replicates (run r uses seed cfg.seed + r), fits
/// the plan plus an OLS comparator at the selected c, and aggregates MISE
/// means with standard errors (sample SD / sqrt(n_runs)). Any run failure
/// aborts with the run index attached. Runs are independent work items;
/// the aggregated report is identical for any thread count.
MCReport run_monte_carlo(const SimConfig& cfg, const FitPlan& plan, int n_runs,
                         int threads = 1);

}  // namespace lrfr
