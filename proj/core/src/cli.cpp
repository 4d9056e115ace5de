#include "lrfr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#include "lrfr/eval.hpp"
#include "lrfr/io.hpp"
#include "lrfr/parallel.hpp"
#include "lrfr/simulation.hpp"
#include "lrfr/tuning.hpp"

namespace lrfr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flat JSON object loaded from --config; CLI flags override its values.
json load_config_object(const std::vector<std::string>& args) {
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") {
      const json cfg = json::parse(read_text_file(args[i + 1]), nullptr, true, true);
      if (!cfg.is_object()) throw validation_error("--config must hold a JSON object");
      return cfg;
    }
  return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& var) {
  if (const auto it = cfg.find(key); it != cfg.end()) {
    try {
      var = it->get<T>();
    } catch (const json::exception&) {
      throw validation_error(std::string("config key '") + key + "' has the wrong type");
    }
  }
}

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("LOWRANK_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw validation_error("LOWRANK_SEED must be a non-negative integer");
  }
}

fs::path ensure_out_dir(const std::string& out) {
  if (out.empty()) throw validation_error("--out directory is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir.string());
  return dir;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    std::uint64_t seed, const json& config_echo,
                    const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
  json manifest;
  manifest["tool"] = "lrfr";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["timestamp_utc"] = utc_timestamp();
  manifest["seed"] = seed;
  manifest["config"] = config_echo;
  manifest["outputs"] = outputs;
  for (const auto& [key, value] : extra.items()) manifest[key] = value;
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void add_solver_flags(CLI::App* cmd, SolverOptions& opts, const json& cfg) {
  from_config(cfg, "max_iters", opts.max_iters);
  from_config(cfg, "rel_tol", opts.rel_tol);
  from_config(cfg, "min_iters", opts.min_iters);
  cmd->add_option("--max-iters", opts.max_iters, "FISTA iteration cap");
  cmd->add_option("--rel-tol", opts.rel_tol, "relative objective-change stop");
  cmd->add_option("--min-iters", opts.min_iters, "minimum FISTA iterations");
}

struct DataArgs {
  std::string covariates;
  std::string responses;
  std::string data_dir;
  bool standardize = false;
};

void add_data_flags(CLI::App* cmd, DataArgs& args, const json& cfg) {
  from_config(cfg, "data", args.data_dir);
  from_config(cfg, "covariates", args.covariates);
  from_config(cfg, "responses", args.responses);
  from_config(cfg, "standardize", args.standardize);
  cmd->add_option("--data", args.data_dir,
                  "dataset directory holding covariates.csv and responses.csv");
  cmd->add_option("--covariates", args.covariates, "covariates CSV path");
  cmd->add_option("--responses", args.responses, "responses CSV path");
  cmd->add_flag("--standardize", args.standardize,
                "standardize responses per coordinate and center covariates");
}

Dataset load_data(const DataArgs& args) {
  fs::path cov = args.covariates.empty()
                     ? fs::path(args.data_dir) / "covariates.csv"
                     : fs::path(args.covariates);
  fs::path resp = args.responses.empty()
                      ? fs::path(args.data_dir) / "responses.csv"
                      : fs::path(args.responses);
  if (args.covariates.empty() && args.data_dir.empty())
    throw validation_error("pass --data DIR or --covariates/--responses paths");
  Dataset data = read_dataset_csv(cov, resp);
  if (args.standardize) standardize_dataset(data);
  return data;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  SimConfig sim;
  std::string out;
  std::string shape_name = "square";
  std::string family_name = "fourier";
  std::string custom_m_path;
  bool noiseless = false;
  bool default_weights = false;
};

json simulate_config_echo(const SimulateArgs& a) {
  json j;
  j["n"] = a.sim.n;
  j["p"] = a.sim.p;
  j["T"] = a.sim.T;
  j["s"] = a.sim.s;
  j["c_true"] = a.sim.c_true;
  j["shape"] = a.shape_name;
  j["snr"] = a.noiseless ? json() : json(a.sim.snr);
  j["noiseless"] = a.noiseless;
  j["true_family"] = a.family_name;
  j["ar_coef"] = a.sim.ar_coef;
  j["cov_decay"] = a.sim.cov_decay;
  j["spectral_weights"] = a.sim.spectral_weights;
  j["out"] = a.out;
  return j;
}

int cmd_simulate(SimulateArgs a) {
  a.sim.shape = shape_from_string(a.shape_name);
  a.sim.true_family = basis_family_from_string(a.family_name);
  if (a.noiseless) a.sim.snr = std::numeric_limits<double>::infinity();
  if (a.sim.shape == Shape::Custom) {
    if (a.custom_m_path.empty())
      throw validation_error("simulate: custom shape needs --custom-m CSV");
    a.sim.custom_M = read_matrix_csv(a.custom_m_path);
  }
  if (a.default_weights)
    a.sim.spectral_weights = default_spectral_weights(a.sim.c_true);

  const fs::path out_dir = ensure_out_dir(a.out);
  const auto [data, truth] = gen_dataset(a.sim);
  write_dataset_csv(data, out_dir / "covariates.csv", out_dir / "responses.csv");
  write_text_file(out_dir / "truth.json", truth_to_json(truth, a.sim));

  const double snr = realized_snr_of(data, truth);
  json extra;
  extra["realized_snr"] = std::isfinite(snr) ? json(snr) : json();
  extra["noiseless"] = truth.nu == 0.0;
  extra["nu"] = truth.nu;
  write_manifest(out_dir, "simulate", a.sim.seed, simulate_config_echo(a),
                 {"covariates.csv", "responses.csv", "truth.json"}, extra);

  std::cout << "simulated n=" << a.sim.n << " subjects (p=" << a.sim.p
            << ", T=" << a.sim.T << ", s=" << a.sim.s << ") into " << out_dir.string()
            << "\n";
  return 0;
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
  DataArgs data;
  std::string out;
  std::string family_name = "fourier";
  int c = 4;
  double lambda = -1.0;
  bool ols = false;
  double ridge = 0.0;
  bool trace = false;
  bool std_curves = false;
  SolverOptions solver;
};

int cmd_fit(const FitArgs& a) {
  if (!a.ols && a.lambda < 0)
    throw validation_error("fit: pass --lambda >= 0 or --ols");
  const BasisFamily family = basis_family_from_string(a.family_name);
  const fs::path out_dir = ensure_out_dir(a.out);

  const Dataset data = load_data(a.data);
  const BasisMatrix B = basis_matrix(BasisSpec{family, a.c}, data.grid);
  const StackedSystem sys = stack_system(data, B);
  const FitResult fit =
      a.ols ? fit_ols(sys, a.ridge) : fit_fista(sys, a.lambda, a.solver);

  const CoefficientFunctions cf{fit.M_hat, BasisSpec{family, a.c}};
  write_text_file(out_dir / "fit.json", fit_result_to_json(fit, family, a.trace));
  write_beta_curves_csv(cf, data.grid, out_dir / "beta_curves.csv");
  if (a.std_curves)
    write_beta_curves_csv(cf, data.grid, out_dir / "beta_curves_standardized.csv",
                          /*standardized=*/true);
  write_scree_csv(fit.M_hat, out_dir / "scree.csv");

  json echo;
  echo["c"] = a.c;
  echo["lambda"] = a.ols ? json() : json(a.lambda);
  echo["ols"] = a.ols;
  echo["ridge"] = a.ridge;
  echo["family"] = a.family_name;
  echo["standardize"] = a.data.standardize;
  std::vector<std::string> outputs{"fit.json", "beta_curves.csv", "scree.csv"};
  if (a.std_curves) outputs.push_back("beta_curves_standardized.csv");
  write_manifest(out_dir, "fit", 0, echo, outputs);

  std::cout << (a.ols ? "ols" : "sieve") << " fit: objective="
            << format_double(fit.objective_trace.back())
            << " iterations=" << fit.iterations
            << " converged=" << (fit.converged ? "true" : "false")
            << " rank=" << effective_rank(fit.M_hat) << "\n";
  return 0;
}

// --- cv ----------------------------------------------------------------------

struct CvArgs {
  DataArgs data;
  std::string out;
  std::string family_name = "fourier";
  std::vector<int> c_grid{2, 3, 4, 5, 6, 7, 8};
  std::vector<double> lambda_grid;  // empty -> default ladder
  int n_lambda = 20;
  double lambda_min_ratio = 1e-4;
  int k_folds = 5;
  std::uint64_t seed = 0;
  int threads = 0;
  bool trace = false;
  SolverOptions solver;
};

int cmd_cv(const CvArgs& a) {
  const BasisFamily family = basis_family_from_string(a.family_name);
  const fs::path out_dir = ensure_out_dir(a.out);
  const Dataset data = load_data(a.data);

  std::vector<double> ladder = a.lambda_grid;
  if (ladder.empty()) {
    const int c_max = *std::max_element(a.c_grid.begin(), a.c_grid.end());
    ladder = default_lambda_ladder(data, c_max, family, a.n_lambda, a.lambda_min_ratio);
  }
  CVGrid grid{a.c_grid, ladder, a.k_folds, a.seed};
  const CVResult result =
      grid_search(data, grid, family, a.solver, resolve_threads(a.threads));

  write_text_file(out_dir / "cv.json", cv_result_to_json(result, grid));
  const std::string table = cv_result_to_markdown(result, grid);
  write_text_file(out_dir / "cv_table.md", table);

  // refit the chosen cell on the full data
  const BasisMatrix B = basis_matrix(BasisSpec{family, result.best_c}, data.grid);
  const FitResult fit = fit_fista(stack_system(data, B), result.best_lambda, a.solver);
  const CoefficientFunctions cf{fit.M_hat, BasisSpec{family, result.best_c}};
  write_text_file(out_dir / "fit.json", fit_result_to_json(fit, family, a.trace));
  write_beta_curves_csv(cf, data.grid, out_dir / "beta_curves.csv");
  write_scree_csv(fit.M_hat, out_dir / "scree.csv");

  json echo;
  echo["family"] = a.family_name;
  echo["c_grid"] = a.c_grid;
  echo["lambda_grid"] = ladder;
  echo["k_folds"] = a.k_folds;
  echo["standardize"] = a.data.standardize;
  write_manifest(out_dir, "cv", a.seed, echo,
                 {"cv.json", "cv_table.md", "fit.json", "beta_curves.csv", "scree.csv"});

  std::cout << table;
  return 0;
}

// --- evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string fit_path;
  std::string truth_path;
  std::string out;
  int n_quad = 1024;
};

int cmd_evaluate(const EvaluateArgs& a) {
  if (a.fit_path.empty() || a.truth_path.empty())
    throw validation_error("evaluate: --fit and --truth are required");
  const fs::path out_dir = ensure_out_dir(a.out);
  const LoadedFit fit = load_fit_json(a.fit_path);
  const LoadedTruth truth = load_truth_json(a.truth_path);
  const MiseReport report = mise(truth.beta_true, fit.cf, a.n_quad);

  write_text_file(out_dir / "mise.json", mise_report_to_json(report));
  const std::string table = mise_report_to_markdown(report);
  write_text_file(out_dir / "mise.md", table);

  json echo;
  echo["fit"] = a.fit_path;
  echo["truth"] = a.truth_path;
  echo["n_quad"] = a.n_quad;
  write_manifest(out_dir, "evaluate", 0, echo, {"mise.json", "mise.md"});

  std::cout << table;
  return 0;
}

// --- mc -------------------------------------------------------------------------

struct McArgs {
  SimConfig sim;
  std::string out;
  std::vector<std::string> shapes{"square", "t", "cross"};
  std::string true_family_name = "fourier";
  std::string fit_family_name = "fourier";
  bool noiseless = false;
  bool default_weights = false;
  int n_runs = 100;
  std::string plan_name = "fixed-c-cv-lambda";
  std::vector<int> c_grid{2, 3, 4, 5, 6, 7, 8};
  int c = 4;
  double lambda = 0.0;
  std::vector<double> lambda_grid;
  int n_lambda = 20;
  double lambda_min_ratio = 1e-4;
  int k_folds = 5;
  int n_quad = 1024;
  int threads = 0;
  bool keep_runs = false;
  SolverOptions solver;
};

FitPlan make_plan(const McArgs& a) {
  FitPlan plan;
  if (a.plan_name == "cv2d")
    plan.kind = FitPlan::Kind::CV2D;
  else if (a.plan_name == "fixed-c-cv-lambda")
    plan.kind = FitPlan::Kind::FixedCCVLambda;
  else if (a.plan_name == "fixed")
    plan.kind = FitPlan::Kind::Fixed;
  else
    throw validation_error("mc: unknown plan '" + a.plan_name +
                           "' (cv2d | fixed-c-cv-lambda | fixed)");
  plan.fitted_family = basis_family_from_string(a.fit_family_name);
  plan.c_values = a.c_grid;
  plan.c_fixed = a.c;
  plan.lambda_fixed = a.lambda;
  plan.lambda_values = a.lambda_grid;
  plan.n_lambda = a.n_lambda;
  plan.lambda_min_ratio = a.lambda_min_ratio;
  plan.k_folds = a.k_folds;
  plan.n_quad = a.n_quad;
  plan.solver = a.solver;
  return plan;
}

int cmd_mc(McArgs a) {
  a.sim.true_family = basis_family_from_string(a.true_family_name);
  if (a.noiseless) a.sim.snr = std::numeric_limits<double>::infinity();
  if (a.default_weights)
    a.sim.spectral_weights = default_spectral_weights(a.sim.c_true);
  if (a.shapes.empty()) throw validation_error("mc: need at least one shape");
  const FitPlan plan = make_plan(a);
  const fs::path out_dir = ensure_out_dir(a.out);
  const int threads = resolve_threads(a.threads);

  std::vector<MCReport> reports;
  json mc_json = json::array();
  for (const std::string& shape_name : a.shapes) {
    SimConfig cfg = a.sim;
    cfg.shape = shape_from_string(shape_name);
    if (cfg.shape == Shape::Custom)
      throw validation_error("mc: custom shapes are not supported here");
    const MCReport report = run_monte_carlo(cfg, plan, a.n_runs, threads);
    mc_json.push_back(json::parse(mc_report_to_json(report, shape_name, a.keep_runs)));
    reports.push_back(report);
  }
  write_text_file(out_dir / "mc.json", mc_json.dump(2) + "\n");
  const std::string table = mc_reports_to_markdown(a.shapes, reports);
  write_text_file(out_dir / "mc.md", table);

  json echo;
  echo["n_runs"] = a.n_runs;
  echo["shapes"] = a.shapes;
  echo["snr"] = a.noiseless ? json() : json(a.sim.snr);
  echo["plan"] = a.plan_name;
  echo["true_family"] = a.true_family_name;
  echo["fit_family"] = a.fit_family_name;
  echo["c"] = a.c;
  echo["c_grid"] = a.c_grid;
  echo["k_folds"] = a.k_folds;
  echo["n"] = a.sim.n;
  echo["p"] = a.sim.p;
  echo["T"] = a.sim.T;
  echo["s"] = a.sim.s;
  echo["c_true"] = a.sim.c_true;
  write_manifest(out_dir, "mc", a.sim.seed, echo, {"mc.json", "mc.md"});

  std::cout << table;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    const json cfg = load_config_object(args);

    CLI::App app{"low-rank functional-response regression toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags override)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic dataset");
    SimulateArgs sim;
    sim_cmd->add_option("--config", config_path, "JSON config file");
    from_config(cfg, "out", sim.out);
    from_config(cfg, "n", sim.sim.n);
    from_config(cfg, "p", sim.sim.p);
    from_config(cfg, "T", sim.sim.T);
    from_config(cfg, "s", sim.sim.s);
    from_config(cfg, "c_true", sim.sim.c_true);
    from_config(cfg, "shape", sim.shape_name);
    from_config(cfg, "snr", sim.sim.snr);
    from_config(cfg, "noiseless", sim.noiseless);
    from_config(cfg, "true_family", sim.family_name);
    from_config(cfg, "ar_coef", sim.sim.ar_coef);
    from_config(cfg, "cov_decay", sim.sim.cov_decay);
    from_config(cfg, "seed", sim.sim.seed);
    from_config(cfg, "spectral_weights", sim.sim.spectral_weights);
    from_config(cfg, "custom_m", sim.custom_m_path);
    sim_cmd->add_option("--out", sim.out, "output directory");
    sim_cmd->add_option("--n", sim.sim.n, "subjects");
    sim_cmd->add_option("--p", sim.sim.p, "response coordinates");
    sim_cmd->add_option("--T", sim.sim.T, "time points");
    sim_cmd->add_option("--s", sim.sim.s, "covariates");
    sim_cmd->add_option("--c-true", sim.sim.c_true, "true basis truncation");
    sim_cmd->add_option("--shape", sim.shape_name, "square | t | cross | custom");
    sim_cmd->add_option("--snr", sim.sim.snr, "target signal-to-noise ratio");
    sim_cmd->add_flag("--noiseless", sim.noiseless, "set nu = 0");
    sim_cmd->add_option("--true-family", sim.family_name, "fourier | chebyshev2");
    sim_cmd->add_option("--ar-coef", sim.sim.ar_coef, "AR(1) coefficient");
    sim_cmd->add_option("--cov-decay", sim.sim.cov_decay, "covariate Toeplitz decay");
    auto* sim_seed = sim_cmd->add_option("--seed", sim.sim.seed, "master seed");
    sim_cmd->add_option("--custom-m", sim.custom_m_path, "custom glyph CSV");
    sim_cmd->add_flag("--default-weights", sim.default_weights,
                      "use the decaying spectral weight sequence");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit one (c, lambda) cell or OLS");
    FitArgs fit;
    fit_cmd->add_option("--config", config_path, "JSON config file");
    add_data_flags(fit_cmd, fit.data, cfg);
    from_config(cfg, "out", fit.out);
    from_config(cfg, "family", fit.family_name);
    from_config(cfg, "c", fit.c);
    from_config(cfg, "lambda", fit.lambda);
    from_config(cfg, "ols", fit.ols);
    from_config(cfg, "ridge", fit.ridge);
    from_config(cfg, "trace", fit.trace);
    from_config(cfg, "std_curves", fit.std_curves);
    fit_cmd->add_option("--out", fit.out, "output directory");
    fit_cmd->add_option("--family", fit.family_name, "fitted basis family");
    fit_cmd->add_option("--c", fit.c, "basis truncation");
    fit_cmd->add_option("--lambda", fit.lambda, "nuclear norm penalty");
    fit_cmd->add_flag("--ols", fit.ols, "closed-form least squares (lambda = 0)");
    fit_cmd->add_option("--ridge", fit.ridge, "ridge added to X^T X for OLS");
    fit_cmd->add_flag("--trace", fit.trace, "include objective trace in fit.json");
    fit_cmd->add_flag("--std-curves", fit.std_curves,
                      "also write standardized coefficient curves");
    add_solver_flags(fit_cmd, fit.solver, cfg);

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "k-fold (c, lambda) grid search + refit");
    CvArgs cv;
    cv_cmd->add_option("--config", config_path, "JSON config file");
    add_data_flags(cv_cmd, cv.data, cfg);
    from_config(cfg, "out", cv.out);
    from_config(cfg, "family", cv.family_name);
    from_config(cfg, "c_grid", cv.c_grid);
    from_config(cfg, "lambda_grid", cv.lambda_grid);
    from_config(cfg, "n_lambda", cv.n_lambda);
    from_config(cfg, "lambda_min_ratio", cv.lambda_min_ratio);
    from_config(cfg, "k_folds", cv.k_folds);
    from_config(cfg, "seed", cv.seed);
    from_config(cfg, "threads", cv.threads);
    from_config(cfg, "trace", cv.trace);
    cv_cmd->add_option("--out", cv.out, "output directory");
    cv_cmd->add_option("--family", cv.family_name, "fitted basis family");
    cv_cmd->add_option("--c-grid", cv.c_grid, "comma-separated c values")
        ->delimiter(',');
    cv_cmd->add_option("--lambda-grid", cv.lambda_grid,
                       "comma-separated lambda values (descending)")
        ->delimiter(',');
    cv_cmd->add_option("--n-lambda", cv.n_lambda, "ladder length when no grid given");
    cv_cmd->add_option("--lambda-min-ratio", cv.lambda_min_ratio,
                       "ladder bottom relative to lambda_dead");
    cv_cmd->add_option("--k-folds", cv.k_folds, "number of folds");
    auto* cv_seed = cv_cmd->add_option("--seed", cv.seed, "fold shuffle seed");
    cv_cmd->add_option("--threads", cv.threads, "worker cap (0 = auto)");
    cv_cmd->add_flag("--trace", cv.trace, "include objective trace in fit.json");
    add_solver_flags(cv_cmd, cv.solver, cfg);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "MISE of a fit against a truth file");
    EvaluateArgs eval;
    eval_cmd->add_option("--config", config_path, "JSON config file");
    from_config(cfg, "fit", eval.fit_path);
    from_config(cfg, "truth", eval.truth_path);
    from_config(cfg, "out", eval.out);
    from_config(cfg, "n_quad", eval.n_quad);
    eval_cmd->add_option("--fit", eval.fit_path, "fit.json path");
    eval_cmd->add_option("--truth", eval.truth_path, "truth.json path");
    eval_cmd->add_option("--out", eval.out, "output directory");
    eval_cmd->add_option("--n-quad", eval.n_quad, "quadrature points");

    // mc
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo study over shapes");
    McArgs mc;
    mc_cmd->add_option("--config", config_path, "JSON config file");
    from_config(cfg, "out", mc.out);
    from_config(cfg, "n", mc.sim.n);
    from_config(cfg, "p", mc.sim.p);
    from_config(cfg, "T", mc.sim.T);
    from_config(cfg, "s", mc.sim.s);
    from_config(cfg, "c_true", mc.sim.c_true);
    from_config(cfg, "snr", mc.sim.snr);
    from_config(cfg, "noiseless", mc.noiseless);
    from_config(cfg, "ar_coef", mc.sim.ar_coef);
    from_config(cfg, "cov_decay", mc.sim.cov_decay);
    from_config(cfg, "seed", mc.sim.seed);
    from_config(cfg, "spectral_weights", mc.sim.spectral_weights);
    from_config(cfg, "shapes", mc.shapes);
    from_config(cfg, "true_family", mc.true_family_name);
    from_config(cfg, "fit_family", mc.fit_family_name);
    from_config(cfg, "n_runs", mc.n_runs);
    from_config(cfg, "plan", mc.plan_name);
    from_config(cfg, "c_grid", mc.c_grid);
    from_config(cfg, "c", mc.c);
    from_config(cfg, "lambda", mc.lambda);
    from_config(cfg, "lambda_grid", mc.lambda_grid);
    from_config(cfg, "n_lambda", mc.n_lambda);
    from_config(cfg, "lambda_min_ratio", mc.lambda_min_ratio);
    from_config(cfg, "k_folds", mc.k_folds);
    from_config(cfg, "n_quad", mc.n_quad);
    from_config(cfg, "threads", mc.threads);
    from_config(cfg, "keep_runs", mc.keep_runs);
    mc_cmd->add_option("--out", mc.out, "output directory");
    mc_cmd->add_option("--n", mc.sim.n, "subjects");
    mc_cmd->add_option("--p", mc.sim.p, "response coordinates");
    mc_cmd->add_option("--T", mc.sim.T, "time points");
    mc_cmd->add_option("--s", mc.sim.s, "covariates");
    mc_cmd->add_option("--c-true", mc.sim.c_true, "true basis truncation");
    mc_cmd->add_option("--snr", mc.sim.snr, "target SNR");
    mc_cmd->add_flag("--noiseless", mc.noiseless, "set nu = 0");
    mc_cmd->add_option("--ar-coef", mc.sim.ar_coef, "AR(1) coefficient");
    mc_cmd->add_option("--cov-decay", mc.sim.cov_decay, "covariate Toeplitz decay");
    auto* mc_seed = mc_cmd->add_option("--seed", mc.sim.seed, "base seed");
    mc_cmd->add_option("--shapes", mc.shapes, "comma-separated shape list")
        ->delimiter(',');
    mc_cmd->add_option("--true-family", mc.true_family_name, "generating basis");
    mc_cmd->add_option("--fit-family", mc.fit_family_name, "fitted basis");
    mc_cmd->add_option("--n-runs", mc.n_runs, "Monte Carlo replicates");
    mc_cmd->add_option("--plan", mc.plan_name, "cv2d | fixed-c-cv-lambda | fixed");
    mc_cmd->add_option("--c-grid", mc.c_grid, "c grid for cv2d")->delimiter(',');
    mc_cmd->add_option("--c", mc.c, "fixed c");
    mc_cmd->add_option("--lambda", mc.lambda, "fixed lambda");
    mc_cmd->add_option("--lambda-grid", mc.lambda_grid, "lambda ladder (descending)")
        ->delimiter(',');
    mc_cmd->add_option("--n-lambda", mc.n_lambda, "ladder length");
    mc_cmd->add_option("--lambda-min-ratio", mc.lambda_min_ratio, "ladder bottom ratio");
    mc_cmd->add_option("--k-folds", mc.k_folds, "folds for CV plans");
    mc_cmd->add_option("--n-quad", mc.n_quad, "MISE quadrature points");
    mc_cmd->add_option("--threads", mc.threads, "worker cap (0 = auto)");
    mc_cmd->add_flag("--keep-runs", mc.keep_runs, "include per-run records in mc.json");
    mc_cmd->add_flag("--default-weights", mc.default_weights,
                     "use the decaying spectral weight sequence");
    add_solver_flags(mc_cmd, mc.solver, cfg);

    std::vector<std::string> argv_vec(args.begin(), args.end());
    try {
      std::vector<const char*> argv;
      argv.push_back("lrfr");
      for (const auto& s : argv_vec) argv.push_back(s.c_str());
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }

    // seed precedence: flag > LOWRANK_SEED env > config file > default
    if (const auto env_seed = seed_from_env()) {
      if (*sim_cmd && sim_seed->count() == 0) sim.sim.seed = *env_seed;
      if (*cv_cmd && cv_seed->count() == 0) cv.seed = *env_seed;
      if (*mc_cmd && mc_seed->count() == 0) mc.sim.seed = *env_seed;
    }

    if (*sim_cmd) return cmd_simulate(std::move(sim));
    if (*fit_cmd) return cmd_fit(fit);
    if (*cv_cmd) return cmd_cv(cv);
    if (*eval_cmd) return cmd_evaluate(eval);
    if (*mc_cmd) return cmd_mc(std::move(mc));
    throw validation_error("no subcommand given");
  } catch (const validation_error& e) {
    std::cerr << "error (validation): " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error (numerical): " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace lrfr
