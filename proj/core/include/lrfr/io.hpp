#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lrfr/design.hpp"
#include "lrfr/eval.hpp"
#include "lrfr/model.hpp"
#include "lrfr/simulation.hpp"
#include "lrfr/solver.hpp"
#include "lrfr/tuning.hpp"

namespace lrfr {

/// Shortest representation that round-trips the exact double.
std::string format_double(double value);
double parse_double(const std::string& text);

// --- CSV -------------------------------------------------------------------

/// Covariates: header x1..xs, n rows. Responses: header subject_id,t,y1..yp,
/// n*T rows in subject-major order; the grid is inferred from the t column.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& covariates,
                       const std::filesystem::path& responses);
Dataset read_dataset_csv(const std::filesystem::path& covariates,
                         const std::filesystem::path& responses);

/// Headerless c x T matrix of basis values.
void write_basis_csv(const BasisMatrix& basis, const std::filesystem::path& path);

/// Headerless numeric matrix, one CSV row per matrix row.
void write_matrix_csv(const Matrix& M, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Columns t,j,l,beta_hat, one row per (grid point, covariate, response).
void write_beta_curves_csv(const CoefficientFunctions& cf, const TimeGrid& grid,
                           const std::filesystem::path& path,
                           bool standardized = false);

/// Singular values of M_hat, one per line, descending.
void write_scree_csv(const CoefMatrix& M, const std::filesystem::path& path);

// --- JSON ------------------------------------------------------------------

std::string fit_result_to_json(const FitResult& fit, BasisFamily family,
                               bool include_trace);

struct LoadedFit {
  CoefficientFunctions cf;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;
  std::vector<double> singular_values;
};
LoadedFit load_fit_json(const std::filesystem::path& path);

std::string truth_to_json(const GroundTruth& truth, const SimConfig& cfg);

struct LoadedTruth {
  CoefficientFunctions beta_true;
  double nu = 0.0;
};
LoadedTruth load_truth_json(const std::filesystem::path& path);

std::string cv_result_to_json(const CVResult& result, const CVGrid& grid);
std::string cv_result_to_markdown(const CVResult& result, const CVGrid& grid);

std::string mise_report_to_json(const MiseReport& report);
/// Rows beta_1..beta_s, values shown as mean x 10^-2 with 3 decimals.
std::string mise_report_to_markdown(const MiseReport& report);

std::string mc_report_to_json(const MCReport& report, const std::string& shape_name,
                              bool include_runs);
/// One column per shape, rows beta_1..beta_s, entries mean(SE) x 10^-2.
std::string mc_reports_to_markdown(const std::vector<std::string>& shape_names,
                                   const std::vector<MCReport>& reports);

// --- small file helpers ------------------------------------------------------

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lrfr
