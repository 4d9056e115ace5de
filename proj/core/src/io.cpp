#include "lrfr/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lrfr {

using nlohmann::json;

std::string format_double(double value) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw io_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw io_error("parse_double: bad number '" + text + "'");
  return value;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw io_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

json matrix_to_row_major(const Matrix& M) {
  json arr = json::array();
  for (Index r = 0; r < M.rows(); ++r)
    for (Index c = 0; c < M.cols(); ++c) arr.push_back(M(r, c));
  return arr;
}

Matrix matrix_from_row_major(const json& arr, Index rows, Index cols) {
  if (static_cast<Index>(arr.size()) != rows * cols)
    throw io_error("matrix payload size mismatch");
  Matrix M(rows, cols);
  Index i = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) M(r, c) = arr[static_cast<size_t>(i++)].get<double>();
  return M;
}

json parse_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw io_error("bad JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace

void write_dataset_csv(const Dataset& data, const std::filesystem::path& covariates,
                       const std::filesystem::path& responses) {
  data.validate();
  {
    std::ostringstream out;
    for (Index j = 0; j < data.s(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
    out << '\n';
    for (Index i = 0; i < data.n(); ++i) {
      for (Index j = 0; j < data.s(); ++j)
        out << (j ? "," : "") << format_double(data.covariates(i, j));
      out << '\n';
    }
    write_text_file(covariates, out.str());
  }
  {
    std::ostringstream out;
    out << "subject_id,t";
    for (Index l = 0; l < data.p(); ++l) out << ",y" << (l + 1);
    out << '\n';
    for (Index i = 0; i < data.n(); ++i)
      for (Index k = 0; k < data.T(); ++k) {
        out << (i + 1) << ',' << format_double(data.grid[k]);
        for (Index l = 0; l < data.p(); ++l)
          out << ',' << format_double(data.responses[static_cast<size_t>(i)](l, k));
        out << '\n';
      }
    write_text_file(responses, out.str());
  }
}

Dataset read_dataset_csv(const std::filesystem::path& covariates,
                         const std::filesystem::path& responses) {
  const auto cov_lines = read_lines(covariates);
  if (cov_lines.size() < 2) throw io_error("covariates CSV: no data rows");
  const Index s = static_cast<Index>(split_csv_line(cov_lines[0]).size());
  const Index n = static_cast<Index>(cov_lines.size()) - 1;
  Matrix X(n, s);
  for (Index i = 0; i < n; ++i) {
    const auto fields = split_csv_line(cov_lines[static_cast<size_t>(i + 1)]);
    if (static_cast<Index>(fields.size()) != s)
      throw io_error("covariates CSV: ragged row " + std::to_string(i + 2));
    for (Index j = 0; j < s; ++j) X(i, j) = parse_double(fields[static_cast<size_t>(j)]);
  }

  const auto resp_lines = read_lines(responses);
  if (resp_lines.size() < 2) throw io_error("responses CSV: no data rows");
  const auto header = split_csv_line(resp_lines[0]);
  if (header.size() < 3 || header[0] != "subject_id" || header[1] != "t")
    throw io_error("responses CSV: expected header subject_id,t,y1..yp");
  const Index p = static_cast<Index>(header.size()) - 2;
  const Index total = static_cast<Index>(resp_lines.size()) - 1;
  if (total % n != 0)
    throw io_error("responses CSV: row count is not a multiple of n");
  const Index T = total / n;

  Vector grid_points(T);
  std::vector<Matrix> Y(static_cast<size_t>(n), Matrix(p, T));
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < T; ++k) {
      const auto fields =
          split_csv_line(resp_lines[static_cast<size_t>(1 + i * T + k)]);
      if (static_cast<Index>(fields.size()) != p + 2)
        throw io_error("responses CSV: ragged row");
      const long id = std::stol(fields[0]);
      if (id != i + 1)
        throw io_error("responses CSV: subjects must appear in order 1..n");
      const double t = parse_double(fields[1]);
      if (i == 0)
        grid_points[k] = t;
      else if (grid_points[k] != t)
        throw io_error("responses CSV: subjects observed on different grids");
      for (Index l = 0; l < p; ++l)
        Y[static_cast<size_t>(i)](l, k) = parse_double(fields[static_cast<size_t>(l + 2)]);
    }

  Dataset data{std::move(X), std::move(Y), TimeGrid(std::move(grid_points))};
  data.validate();
  return data;
}

void write_matrix_csv(const Matrix& M, const std::filesystem::path& path) {
  std::ostringstream out;
  for (Index r = 0; r < M.rows(); ++r) {
    for (Index c = 0; c < M.cols(); ++c)
      out << (c ? "," : "") << format_double(M(r, c));
    out << '\n';
  }
  write_text_file(path, out.str());
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw io_error("matrix CSV is empty: " + path.string());
  const Index rows = static_cast<Index>(lines.size());
  const Index cols = static_cast<Index>(split_csv_line(lines[0]).size());
  Matrix M(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto fields = split_csv_line(lines[static_cast<size_t>(r)]);
    if (static_cast<Index>(fields.size()) != cols)
      throw io_error("matrix CSV: ragged row in " + path.string());
    for (Index c = 0; c < cols; ++c)
      M(r, c) = parse_double(fields[static_cast<size_t>(c)]);
  }
  return M;
}

void write_basis_csv(const BasisMatrix& basis, const std::filesystem::path& path) {
  write_matrix_csv(basis.values, path);
}

void write_beta_curves_csv(const CoefficientFunctions& cf, const TimeGrid& grid,
                           const std::filesystem::path& path, bool standardized) {
  cf.validate();
  std::ostringstream out;
  out << "t,j,l,beta_hat\n";
  for (Index j = 1; j <= cf.M.s; ++j) {
    const Matrix curves = standardized ? standardized_beta_on_grid(cf, j, grid)
                                       : beta_on_grid(cf, j, grid);
    for (Index k = 0; k < grid.size(); ++k)
      for (Index l = 0; l < cf.M.p(); ++l)
        out << format_double(grid[k]) << ',' << j << ',' << (l + 1) << ','
            << format_double(curves(l, k)) << '\n';
  }
  write_text_file(path, out.str());
}

void write_scree_csv(const CoefMatrix& M, const std::filesystem::path& path) {
  const auto values = scree(M, static_cast<int>(std::min(M.p(), M.sc())));
  std::ostringstream out;
  for (double v : values) out << format_double(v) << '\n';
  write_text_file(path, out.str());
}

std::string fit_result_to_json(const FitResult& fit, BasisFamily family,
                               bool include_trace) {
  json j;
  j["dims"] = {{"p", fit.M_hat.p()}, {"s", fit.M_hat.s}, {"c", fit.M_hat.c}};
  j["basis_family"] = to_string(family);
  j["lambda"] = fit.lambda_used;
  j["c"] = fit.M_hat.c;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["objective"] = fit.objective_trace.empty() ? 0.0 : fit.objective_trace.back();
  j["singular_values"] = fit.singular_values;
  j["M_hat"] = matrix_to_row_major(fit.M_hat.M);
  if (include_trace) j["objective_trace"] = fit.objective_trace;
  return j.dump(2) + "\n";
}

LoadedFit load_fit_json(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  try {
    const Index p = j.at("dims").at("p").get<Index>();
    const Index s = j.at("dims").at("s").get<Index>();
    const int c = j.at("dims").at("c").get<int>();
    LoadedFit fit;
    fit.cf.M = CoefMatrix{matrix_from_row_major(j.at("M_hat"), p, s * c), s, c};
    fit.cf.basis = BasisSpec{basis_family_from_string(j.at("basis_family").get<std::string>()), c};
    fit.lambda = j.at("lambda").get<double>();
    fit.iterations = j.at("iterations").get<int>();
    fit.converged = j.at("converged").get<bool>();
    fit.objective = j.at("objective").get<double>();
    fit.singular_values = j.at("singular_values").get<std::vector<double>>();
    return fit;
  } catch (const json::exception& e) {
    throw io_error("bad fit JSON " + path.string() + ": " + e.what());
  }
}

std::string truth_to_json(const GroundTruth& truth, const SimConfig& cfg) {
  json j;
  j["p"] = truth.M_star.p();
  j["s"] = truth.M_star.s;
  j["c_true"] = truth.M_star.c;
  j["basis_family"] = to_string(cfg.true_family);
  j["shape"] = to_string(cfg.shape);
  j["nu"] = truth.nu;
  j["snr"] = std::isinf(cfg.snr) ? json() : json(cfg.snr);
  j["seed"] = cfg.seed;
  j["spectral_weights"] = cfg.spectral_weights;
  j["M_star"] = matrix_to_row_major(truth.M_star.M);
  return j.dump(2) + "\n";
}

LoadedTruth load_truth_json(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  try {
    const Index p = j.at("p").get<Index>();
    const Index s = j.at("s").get<Index>();
    const int c = j.at("c_true").get<int>();
    LoadedTruth truth;
    truth.beta_true.M = CoefMatrix{matrix_from_row_major(j.at("M_star"), p, s * c), s, c};
    truth.beta_true.basis =
        BasisSpec{basis_family_from_string(j.at("basis_family").get<std::string>()), c};
    truth.nu = j.at("nu").get<double>();
    return truth;
  } catch (const json::exception& e) {
    throw io_error("bad truth JSON " + path.string() + ": " + e.what());
  }
}

std::string cv_result_to_json(const CVResult& result, const CVGrid& grid) {
  json j;
  j["best_c"] = result.best_c;
  j["best_lambda"] = result.best_lambda;
  j["c_values"] = grid.c_values;
  j["lambda_values"] = grid.lambda_values;
  j["k_folds"] = grid.k_folds;
  j["seed"] = grid.seed;
  j["fold_assignment"] = result.fold_assignment;
  json table = json::array();
  for (Index ci = 0; ci < result.score_table.rows(); ++ci) {
    json row = json::array();
    for (Index li = 0; li < result.score_table.cols(); ++li)
      row.push_back(result.score_table(ci, li));
    table.push_back(row);
  }
  j["score_table"] = table;
  return j.dump(2) + "\n";
}

std::string cv_result_to_markdown(const CVResult& result, const CVGrid& grid) {
  std::ostringstream out;
  out << "best cell: c = " << result.best_c
      << ", lambda = " << format_double(result.best_lambda) << "\n\n";
  out << "| c \\ lambda |";
  for (double l : grid.lambda_values) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.4g |", l);
    out << buf;
  }
  out << '\n' << "|---|";
  for (size_t i = 0; i < grid.lambda_values.size(); ++i) out << "---|";
  out << '\n';
  for (Index ci = 0; ci < result.score_table.rows(); ++ci) {
    out << "| " << grid.c_values[static_cast<size_t>(ci)] << " |";
    for (Index li = 0; li < result.score_table.cols(); ++li) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %.6g |", result.score_table(ci, li));
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string mise_report_to_json(const MiseReport& report) {
  json j;
  j["per_j"] = report.per_j;
  j["quadrature_points"] = report.quadrature_points;
  return j.dump(2) + "\n";
}

std::string mise_report_to_markdown(const MiseReport& report) {
  std::ostringstream out;
  out << "| coefficient | MISE (x 10^-2) |\n|---|---|\n";
  for (size_t j = 0; j < report.per_j.size(); ++j) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", report.per_j[j] * 100.0);
    out << "| beta_" << (j + 1) << " | " << buf << " |\n";
  }
  return out.str();
}

std::string mc_report_to_json(const MCReport& report, const std::string& shape_name,
                              bool include_runs) {
  json j;
  j["shape"] = shape_name;
  j["n_runs"] = report.n_runs;
  j["se_defined"] = report.se_defined;
  j["sieve_mise_mean"] = report.sieve_mise_mean;
  j["sieve_mise_se"] = report.sieve_mise_se;
  j["ols_mise_mean"] = report.ols_mise_mean;
  j["ols_mise_se"] = report.ols_mise_se;
  j["mean_selected_c"] = report.mean_selected_c;
  j["se_selected_c"] = report.se_selected_c;
  j["mean_rank"] = report.mean_rank;
  j["se_rank"] = report.se_rank;
  if (include_runs) {
    json runs = json::array();
    for (const MCRunRecord& rec : report.runs) {
      runs.push_back({{"seed", rec.seed},
                      {"selected_c", rec.selected_c},
                      {"selected_lambda", rec.selected_lambda},
                      {"rank", rec.rank},
                      {"sieve_mise", rec.sieve_mise},
                      {"ols_mise", rec.ols_mise}});
    }
    j["runs"] = runs;
  }
  return j.dump(2) + "\n";
}

namespace {

std::string mean_se_cell(double mean, double se) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f(%.3f)", mean * 100.0, se * 100.0);
  return buf;
}

}  // namespace

std::string mc_reports_to_markdown(const std::vector<std::string>& shape_names,
                                   const std::vector<MCReport>& reports) {
  if (shape_names.size() != reports.size() || reports.empty())
    throw validation_error("mc markdown: shape/report count mismatch");
  const size_t s = reports.front().sieve_mise_mean.size();
  std::ostringstream out;

  auto emit_panel = [&](const char* title, bool sieve) {
    out << "| " << title << " |";
    for (const auto& name : shape_names) out << ' ' << name << " |";
    out << '\n' << "|---|";
    for (size_t i = 0; i < shape_names.size(); ++i) out << "---|";
    out << '\n';
    for (size_t j = 0; j < s; ++j) {
      out << "| beta_" << (j + 1) << " |";
      for (const MCReport& rep : reports) {
        const auto& mean = sieve ? rep.sieve_mise_mean : rep.ols_mise_mean;
        const auto& se = sieve ? rep.sieve_mise_se : rep.ols_mise_se;
        out << ' ' << mean_se_cell(mean[j], se[j]) << " |";
      }
      out << '\n';
    }
  };

  emit_panel("MISE(sieve) x 10^-2", true);
  out << '\n';
  emit_panel("MISE(OLS) x 10^-2", false);
  out << '\n';

  out << "| summary |";
  for (const auto& name : shape_names) out << ' ' << name << " |";
  out << '\n' << "|---|";
  for (size_t i = 0; i < shape_names.size(); ++i) out << "---|";
  out << '\n';
  out << "| mean selected c |";
  for (const MCReport& rep : reports) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.3f(%.3f) |", rep.mean_selected_c,
                  rep.se_selected_c);
    out << buf;
  }
  out << '\n';
  out << "| mean rank |";
  for (const MCReport& rep : reports) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.3f(%.3f) |", rep.mean_rank, rep.se_rank);
    out << buf;
  }
  out << '\n';
  return out.str();
}

}  // namespace lrfr
