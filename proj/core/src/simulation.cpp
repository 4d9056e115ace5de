#include "lrfr/simulation.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lrfr/eval.hpp"
#include "lrfr/parallel.hpp"
#include "lrfr/tuning.hpp"

namespace lrfr {

namespace {

constexpr std::uint64_t kCovariateStream = 0;
constexpr std::uint64_t kErrorStream = 1;
constexpr std::uint64_t kFoldStream = 2;

void fill_rect(Matrix& M, Index row_lo, Index row_hi, Index col_lo, Index col_hi) {
  // 1-based inclusive bounds
  M.block(row_lo - 1, col_lo - 1, row_hi - row_lo + 1, col_hi - col_lo + 1).setOnes();
}

}  // namespace

Shape shape_from_string(const std::string& name) {
  if (name == "square" || name == "Square") return Shape::Square;
  if (name == "t" || name == "tshape" || name == "TShape") return Shape::TShape;
  if (name == "cross" || name == "Cross") return Shape::Cross;
  if (name == "custom" || name == "Custom") return Shape::Custom;
  throw validation_error("unknown shape: " + name);
}

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::Square: return "square";
    case Shape::TShape: return "t";
    case Shape::Cross: return "cross";
    case Shape::Custom: return "custom";
  }
  return "custom";
}

void SimConfig::validate() const {
  if (n < 1 || p < 1 || T < 1 || s < 1 || c_true < 1)
    throw validation_error("SimConfig: dimensions must be positive");
  if (!(snr > 0))  // +inf allowed (noiseless)
    throw validation_error("SimConfig: snr must be > 0");
  if (!(std::abs(ar_coef) < 1))
    throw validation_error("SimConfig: |ar_coef| must be < 1");
  if (!(std::abs(cov_decay) < 1))
    throw validation_error("SimConfig: |cov_decay| must be < 1");
  if (!spectral_weights.empty() &&
      static_cast<int>(spectral_weights.size()) != c_true)
    throw validation_error("SimConfig: spectral_weights length must equal c_true");
}

Matrix gen_covariates(Index n, Index s, double decay, std::uint64_t seed) {
  if (n < 1 || s < 1) throw validation_error("gen_covariates: n, s must be >= 1");
  if (!(std::abs(decay) < 1))
    throw validation_error("gen_covariates: |decay| must be < 1");
  Matrix sigma(s, s);
  for (Index a = 0; a < s; ++a)
    for (Index b = 0; b < s; ++b)
      sigma(a, b) = std::pow(decay, std::abs(static_cast<double>(a - b)));
  const Matrix chol = sigma.llt().matrixL();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix X(n, s);
  Vector z(s);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < s; ++j) z[j] = gauss(rng);
    X.row(i) = (chol * z).transpose();
  }
  return X;
}

Matrix ar1_filter(const Matrix& innovations, double ar_coef) {
  if (!(std::abs(ar_coef) < 1))
    throw validation_error("ar1_filter: |ar_coef| must be < 1");
  Matrix e(innovations.rows(), innovations.cols());
  for (Index j = 0; j < innovations.rows(); ++j) {
    double prev = 0.0;  // E(0) = 0
    for (Index k = 0; k < innovations.cols(); ++k) {
      prev = ar_coef * prev + innovations(j, k);
      e(j, k) = prev;
    }
  }
  return e;
}

std::vector<Matrix> gen_ar1_errors(Index n, Index p, Index T, double ar_coef,
                                   std::uint64_t seed) {
  if (n < 1 || p < 1 || T < 1)
    throw validation_error("gen_ar1_errors: n, p, T must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> errors;
  errors.reserve(static_cast<size_t>(n));
  Matrix innov(p, T);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j)
      for (Index k = 0; k < T; ++k) innov(j, k) = gauss(rng);
    errors.push_back(ar1_filter(innov, ar_coef));
  }
  return errors;
}

Matrix make_shape_M(Shape shape, Index p, Index sc) {
  if (shape == Shape::Custom)
    throw validation_error("make_shape_M: pass the custom matrix directly");
  if (p != 32 || sc != 32)
    throw validation_error(
        "make_shape_M: named shapes are defined on the 32 x 32 grid; use a "
        "custom coefficient matrix for other sizes");
  Matrix M = Matrix::Zero(p, sc);
  switch (shape) {
    case Shape::Square:
      fill_rect(M, 9, 24, 9, 24);
      break;
    case Shape::TShape:
      fill_rect(M, 5, 9, 7, 26);    // horizontal bar
      fill_rect(M, 5, 28, 14, 19);  // vertical stem
      break;
    case Shape::Cross:
      fill_rect(M, 14, 19, 5, 28);  // horizontal bar
      fill_rect(M, 5, 28, 14, 19);  // vertical bar
      break;
    case Shape::Custom:
      break;
  }
  return M;
}

double calibrate_nu(const CoefMatrix& M_star, const std::vector<Matrix>& X_designs,
                    const std::vector<Matrix>& E_raw, double target_snr) {
  if (!(target_snr > 0)) throw validation_error("calibrate_nu: target_snr must be > 0");
  if (X_designs.size() != E_raw.size() || X_designs.empty())
    throw validation_error("calibrate_nu: design/error count mismatch");
  double signal = 0.0, noise = 0.0;
  for (size_t i = 0; i < X_designs.size(); ++i) {
    signal += (M_star.M * X_designs[i]).squaredNorm();
    noise += E_raw[i].squaredNorm();
  }
  if (signal <= 0.0) throw validation_error("calibrate_nu: zero signal energy");
  if (noise <= 0.0) throw validation_error("calibrate_nu: zero noise energy");
  return std::sqrt(signal / (target_snr * noise));
}

double realized_snr(const CoefMatrix& M_star, const std::vector<Matrix>& X_designs,
                    double nu, const std::vector<Matrix>& E_raw) {
  double signal = 0.0, noise = 0.0;
  for (size_t i = 0; i < X_designs.size(); ++i) {
    signal += (M_star.M * X_designs[i]).squaredNorm();
    noise += E_raw[i].squaredNorm();
  }
  return signal / (nu * nu * noise);
}

double realized_snr_of(const Dataset& data, const GroundTruth& truth) {
  data.validate();
  const BasisMatrix B = basis_matrix(truth.beta_true.basis, data.grid);
  double signal = 0.0, noise = 0.0;
  for (Index i = 0; i < data.n(); ++i) {
    const Matrix fitted = truth.M_star.M * subject_design(data.covariates.row(i), B);
    signal += fitted.squaredNorm();
    noise += (data.responses[static_cast<size_t>(i)] - fitted).squaredNorm();
  }
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return signal / noise;
}

std::vector<double> default_spectral_weights(int c_true) {
  if (c_true < 1) throw validation_error("default_spectral_weights: c_true must be >= 1");
  std::vector<double> w(static_cast<size_t>(c_true));
  const double head[4] = {1.0, 0.8, 0.6, 0.5};
  for (int h = 1; h <= c_true; ++h) {
    if (h <= 4)
      w[static_cast<size_t>(h - 1)] = head[h - 1];
    else
      w[static_cast<size_t>(h - 1)] = 8.0 * std::pow(static_cast<double>(h - 2), -4.0);
  }
  return w;
}

namespace {

// True coefficient matrix. Plain truth lays the glyph over the p x (s*c)
// coefficient grid. With spectral weights, glyph columns cover basis
// indices h = 1..8 per covariate (scaled by w_h) and the h >= 9 tail gets
// the shared coefficient w_h in every (j, l) slot.
CoefMatrix make_truth_M(const SimConfig& cfg) {
  if (cfg.spectral_weights.empty()) {
    Matrix glyph = cfg.shape == Shape::Custom
                       ? cfg.custom_M
                       : make_shape_M(cfg.shape, cfg.p, cfg.s * cfg.c_true);
    if (glyph.rows() != cfg.p || glyph.cols() != cfg.s * cfg.c_true)
      throw validation_error("gen_dataset: custom coefficient matrix must be p x (s*c_true)");
    return CoefMatrix{std::move(glyph), cfg.s, cfg.c_true};
  }

  constexpr int kGlyphBasis = 8;
  const Matrix glyph = cfg.shape == Shape::Custom
                           ? cfg.custom_M
                           : make_shape_M(cfg.shape, cfg.p, cfg.s * kGlyphBasis);
  if (glyph.rows() != cfg.p || glyph.cols() != cfg.s * kGlyphBasis)
    throw validation_error(
        "gen_dataset: weighted truth needs a p x (8*s) glyph (s = 4 for the "
        "named shapes)");
  const auto& w = cfg.spectral_weights;
  CoefMatrix M = CoefMatrix::zero(cfg.p, cfg.s, cfg.c_true);
  for (Index j = 0; j < cfg.s; ++j) {
    for (int h = 1; h <= cfg.c_true; ++h) {
      const double wh = w[static_cast<size_t>(h - 1)];
      for (Index l = 0; l < cfg.p; ++l) {
        double value;
        if (h <= kGlyphBasis)
          value = wh * glyph(l, j * kGlyphBasis + h - 1);
        else
          value = wh;
        M.M(l, j * cfg.c_true + h - 1) = value;
      }
    }
  }
  return M;
}

}  // namespace

std::pair<Dataset, GroundTruth> gen_dataset(const SimConfig& cfg) {
  cfg.validate();
  const TimeGrid grid = TimeGrid::uniform(cfg.T);
  const BasisSpec true_spec{cfg.true_family, cfg.c_true};
  const BasisMatrix B = basis_matrix(true_spec, grid);

  const Matrix covariates =
      gen_covariates(cfg.n, cfg.s, cfg.cov_decay, substream_seed(cfg.seed, kCovariateStream));
  const std::vector<Matrix> errors =
      gen_ar1_errors(cfg.n, cfg.p, cfg.T, cfg.ar_coef, substream_seed(cfg.seed, kErrorStream));

  CoefMatrix M_star = make_truth_M(cfg);

  std::vector<Matrix> designs;
  designs.reserve(static_cast<size_t>(cfg.n));
  for (Index i = 0; i < cfg.n; ++i)
    designs.push_back(subject_design(covariates.row(i), B));

  const double nu = std::isinf(cfg.snr)
                        ? 0.0
                        : calibrate_nu(M_star, designs, errors, cfg.snr);

  Dataset data{covariates, {}, grid};
  data.responses.reserve(static_cast<size_t>(cfg.n));
  for (Index i = 0; i < cfg.n; ++i)
    data.responses.push_back(M_star.M * designs[static_cast<size_t>(i)] +
                             nu * errors[static_cast<size_t>(i)]);

  GroundTruth truth{M_star, nu, CoefficientFunctions{M_star, true_spec}};
  return {std::move(data), std::move(truth)};
}

void FitPlan::validate() const {
  solver.validate();
  if (k_folds < 2) throw validation_error("FitPlan: k_folds must be >= 2");
  if (n_quad < 2) throw validation_error("FitPlan: n_quad must be >= 2");
  switch (kind) {
    case Kind::CV2D:
      if (c_values.empty())
        throw validation_error("FitPlan: CV2D needs a non-empty c grid");
      break;
    case Kind::FixedCCVLambda:
    case Kind::Fixed:
      if (c_fixed < 1) throw validation_error("FitPlan: c must be >= 1");
      if (kind == Kind::Fixed && lambda_fixed < 0)
        throw validation_error("FitPlan: lambda must be >= 0");
      break;
  }
  if (!lambda_values.empty() &&
      !std::is_sorted(lambda_values.begin(), lambda_values.end(),
                      std::greater<double>()))
    throw validation_error("FitPlan: lambda_values must be sorted descending");
}

namespace {

MCRunRecord run_single(const SimConfig& base_cfg, const FitPlan& plan,
                       std::uint64_t run_seed) {
  SimConfig cfg = base_cfg;
  cfg.seed = run_seed;
  auto [data, truth] = gen_dataset(cfg);

  int selected_c = plan.c_fixed;
  double selected_lambda = plan.lambda_fixed;
  FitResult sieve;

  switch (plan.kind) {
    case FitPlan::Kind::Fixed: {
      const BasisMatrix B =
          basis_matrix(BasisSpec{plan.fitted_family, plan.c_fixed}, data.grid);
      sieve = fit_fista(GramSystem::from(stack_system(data, B)), plan.lambda_fixed,
                        plan.solver);
      break;
    }
    case FitPlan::Kind::FixedCCVLambda: {
      const std::vector<double> ladder =
          plan.lambda_values.empty()
              ? default_lambda_ladder(data, plan.c_fixed, plan.fitted_family,
                                      plan.n_lambda, plan.lambda_min_ratio)
              : plan.lambda_values;
      CVGrid grid{{plan.c_fixed}, ladder, plan.k_folds,
                  substream_seed(run_seed, kFoldStream)};
      const CVResult cv = grid_search(data, grid, plan.fitted_family, plan.solver);
      selected_lambda = cv.best_lambda;
      const BasisMatrix B =
          basis_matrix(BasisSpec{plan.fitted_family, plan.c_fixed}, data.grid);
      sieve = fit_fista(GramSystem::from(stack_system(data, B)), selected_lambda,
                        plan.solver);
      break;
    }
    case FitPlan::Kind::CV2D: {
      const std::vector<double> ladder =
          plan.lambda_values.empty()
              ? default_lambda_ladder(data,
                                      *std::max_element(plan.c_values.begin(),
                                                        plan.c_values.end()),
                                      plan.fitted_family, plan.n_lambda,
                                      plan.lambda_min_ratio)
              : plan.lambda_values;
      CVGrid grid{plan.c_values, ladder, plan.k_folds,
                  substream_seed(run_seed, kFoldStream)};
      const CVResult cv = grid_search(data, grid, plan.fitted_family, plan.solver);
      selected_c = cv.best_c;
      selected_lambda = cv.best_lambda;
      const BasisMatrix B =
          basis_matrix(BasisSpec{plan.fitted_family, selected_c}, data.grid);
      sieve = fit_fista(GramSystem::from(stack_system(data, B)), selected_lambda,
                        plan.solver);
      break;
    }
  }

  const BasisMatrix B_sel =
      basis_matrix(BasisSpec{plan.fitted_family, selected_c}, data.grid);
  const FitResult ols = fit_ols(GramSystem::from(stack_system(data, B_sel)));

  const CoefficientFunctions cf_sieve{sieve.M_hat,
                                      BasisSpec{plan.fitted_family, selected_c}};
  const CoefficientFunctions cf_ols{ols.M_hat,
                                    BasisSpec{plan.fitted_family, selected_c}};

  MCRunRecord rec;
  rec.sieve_mise = mise(truth.beta_true, cf_sieve, plan.n_quad).per_j;
  rec.ols_mise = mise(truth.beta_true, cf_ols, plan.n_quad).per_j;
  rec.selected_c = selected_c;
  rec.selected_lambda = selected_lambda;
  rec.rank = effective_rank(sieve.M_hat);
  rec.seed = run_seed;
  return rec;
}

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
  const double n = static_cast<double>(xs.size());
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

}  // namespace

MCReport run_monte_carlo(const SimConfig& cfg, const FitPlan& plan, int n_runs,
                         int threads) {
  cfg.validate();
  plan.validate();
  if (n_runs < 1) throw validation_error("run_monte_carlo: n_runs must be >= 1");

  std::vector<MCRunRecord> records(static_cast<size_t>(n_runs));
  run_indexed(n_runs, threads, [&](Index r) {
    try {
      records[static_cast<size_t>(r)] = run_single(cfg, plan, cfg.seed + r);
    } catch (const std::exception& e) {
      throw numeric_error("monte carlo run " + std::to_string(r) + ": " + e.what());
    }
  });

  MCReport report;
  report.n_runs = n_runs;
  report.s = cfg.s;
  report.se_defined = n_runs > 1;
  report.runs = records;

  const size_t s = static_cast<size_t>(cfg.s);
  report.sieve_mise_mean.resize(s);
  report.sieve_mise_se.resize(s);
  report.ols_mise_mean.resize(s);
  report.ols_mise_se.resize(s);
  std::vector<double> buf(static_cast<size_t>(n_runs));
  for (size_t j = 0; j < s; ++j) {
    for (int r = 0; r < n_runs; ++r) buf[static_cast<size_t>(r)] = records[static_cast<size_t>(r)].sieve_mise[j];
    mean_se(buf, report.sieve_mise_mean[j], report.sieve_mise_se[j]);
    for (int r = 0; r < n_runs; ++r) buf[static_cast<size_t>(r)] = records[static_cast<size_t>(r)].ols_mise[j];
    mean_se(buf, report.ols_mise_mean[j], report.ols_mise_se[j]);
  }
  for (int r = 0; r < n_runs; ++r)
    buf[static_cast<size_t>(r)] = static_cast<double>(records[static_cast<size_t>(r)].selected_c);
  mean_se(buf, report.mean_selected_c, report.se_selected_c);
  for (int r = 0; r < n_runs; ++r)
    buf[static_cast<size_t>(r)] = static_cast<double>(records[static_cast<size_t>(r)].rank);
  mean_se(buf, report.mean_rank, report.se_rank);
  return report;
}

}  // namespace lrfr
