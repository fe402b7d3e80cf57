#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pddcov/bench.hpp"
#include "pddcov/cli_config.hpp"
#include "pddcov/clime.hpp"
#include "pddcov/crossval.hpp"
#include "pddcov/csv.hpp"
#include "pddcov/errors.hpp"
#include "pddcov/moments.hpp"
#include "pddcov/pdd_rates.hpp"
#include "pddcov/simulate.hpp"
#include "pddcov/spice.hpp"
#include "pddcov/threshold.hpp"

namespace {

using nlohmann::json;
using namespace pddcov;

TimeSeriesPanel load_panel(const std::string& path, bool transpose) {
  Eigen::MatrixXd m = read_csv_matrix(path);
  if (transpose) m.transposeInPlace();
  return TimeSeriesPanel(std::move(m));
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  if (const auto env = cli::env_seed_override()) return *env;
  return flag_seed;
}

ThresholdRule rule_from_name(const std::string& name, double scad_a,
                             double alasso_eta) {
  ThresholdRule rule;
  rule.scad_a = scad_a;
  rule.al_eta = alasso_eta;
  if (name == "hard") {
    rule.kind = ThresholdKind::hard;
  } else if (name == "soft") {
    rule.kind = ThresholdKind::soft;
  } else if (name == "scad") {
    rule.kind = ThresholdKind::scad;
  } else if (name == "alasso") {
    rule.kind = ThresholdKind::adaptive_lasso;
  } else {
    throw BadParam("'" + name + "' is not a thresholding rule");
  }
  return rule;
}

TuningGrid grid_from_flag(const std::string& flag) {
  if (flag == "auto") return default_grid();
  TuningGrid grid;
  std::string token;
  std::istringstream stream(flag);
  while (std::getline(stream, token, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      grid.values.push_back(v);
    } catch (const std::logic_error&) {
      throw BadParam("grid entry '" + token + "' is not a number");
    }
  }
  double prev = 0.0;
  for (double v : grid.values) {
    if (!(v > prev)) {
      throw BadParam("grid must be strictly increasing and positive");
    }
    prev = v;
  }
  if (grid.values.empty()) throw BadParam("grid is empty");
  return grid;
}

std::string plan_digest(const GapBlockPlan& plan) {
  std::string text = std::to_string(plan.n) + ";" + std::to_string(plan.h1) +
                     ";" + std::to_string(plan.h2);
  for (const CvSplit& s : plan.splits) {
    text += "|v";
    for (int c : s.validation) text += ":" + std::to_string(c);
    text += "|t";
    for (int c : s.training) text += ":" + std::to_string(c);
  }
  return cli::hex64(cli::fnv1a(text));
}

json curve_json(const SelectResult& sel) {
  json curve = json::array();
  for (const CurvePoint& pt : sel.curve) {
    json row;
    row["value"] = pt.value;
    if (std::isinf(pt.loss)) {
      row["loss"] = "inf";
    } else {
      row["loss"] = pt.loss;
    }
    curve.push_back(row);
  }
  return curve;
}

void emit_output(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content << "\n";
  } else {
    cli::write_text_file(out, content);
  }
}

// ------------------------------------------------------------- simulate ---

struct SimulateArgs {
  int model = 1;
  int p = 10;
  int n = 200;
  std::string alpha = "1";
  std::uint64_t seed = 0;
  std::string out;
  int n_terms = 8;
  double fit_tol = 0.05;
};

int run_simulate(const SimulateArgs& a) {
  const double alpha = cli::parse_alpha_string(a.alpha);
  const std::uint64_t seed = resolve_seed(a.seed);
  const ExpSumFit fit = std::isinf(alpha)
                            ? ExpSumFit::iid_sentinel(a.n)
                            : fit_exp_sum(alpha, a.n, a.n_terms, a.fit_tol);
  const TimeSeriesPanel panel =
      simulate_pdd(ModelSpec{a.model, a.p}, fit, a.n, seed);
  write_csv_matrix(a.out, panel.data());

  json config;
  config["model"] = a.model;
  config["p"] = a.p;
  config["n"] = a.n;
  config["alpha"] = cli::alpha_to_string(alpha);
  config["n_terms"] = a.n_terms;
  config["fit_tol"] = a.fit_tol;
  json manifest = cli::make_manifest("simulate", config, seed, {},
                                     {{a.out, cli::file_digest(a.out)}});
  manifest["fit"] = {{"a", fit.a},
                     {"b", fit.b},
                     {"max_rel_err", fit.max_rel_err}};
  manifest["normalization_factor"] = normalization_factor(fit);
  cli::write_text_file(cli::manifest_path_for(a.out), manifest.dump(2) + "\n");
  std::cout << "wrote " << a.out << " (" << a.p << "x" << a.n << ")\n";
  return 0;
}

// ------------------------------------------------------------- estimate ---

struct EstimateArgs {
  std::string input;
  bool transpose = false;
  std::string method;
  std::string target = "cov";
  std::string out;
  double tau = -1.0;
  double scad_a = 3.7;
  double alasso_eta = 1.0;
  double lambda1 = -1.0;
  std::string epsilon = "auto";
  double xi = -1.0;
  double lambda2 = -1.0;
  double solver_tol = 1e-7;
  int max_iter = 10000;
  int threads = 0;
};

int run_estimate(const EstimateArgs& a) {
  const TimeSeriesPanel panel = load_panel(a.input, a.transpose);
  json details;
  details["method"] = a.method;
  SymmetricMatrix estimate(DenseMatrix::Identity(1, 1));

  if (a.method == "sample") {
    estimate = a.target == "corr" ? sample_correlation(panel)
                                  : sample_covariance(panel);
    details["target"] = a.target;
  } else if (a.method == "sample_inverse") {
    estimate = inverse(sample_covariance(panel));
  } else if (a.method == "hard" || a.method == "soft" || a.method == "scad" ||
             a.method == "alasso") {
    if (!(a.tau >= 0.0)) throw BadParam("--tau is required for " + a.method);
    const ThresholdRule rule = rule_from_name(a.method, a.scad_a,
                                              a.alasso_eta);
    estimate = a.target == "corr"
                   ? threshold_correlation(sample_correlation(panel), a.tau,
                                           rule)
                   : threshold_covariance(sample_covariance(panel), a.tau,
                                          rule);
    details["tau"] = a.tau;
    details["target"] = a.target;
  } else if (a.method == "clime") {
    if (!(a.lambda1 > 0.0)) throw BadParam("--lambda1 is required for clime");
    ClimeConfig cfg;
    cfg.lambda1 = a.lambda1;
    if (a.epsilon == "auto") {
      cfg.epsilon = default_epsilon(panel.n());
    } else {
      try {
        cfg.epsilon = std::stod(a.epsilon);
      } catch (const std::logic_error&) {
        throw BadParam("--epsilon must be a number or 'auto'");
      }
    }
    if (a.xi >= 0.0) cfg.xi = a.xi;
    cfg.solver_tol = a.solver_tol;
    cfg.max_iter = a.max_iter;
    cfg.threads = a.threads;
    const ClimeResult result = clime_estimate(sample_covariance(panel), cfg);
    estimate = result.omega;
    details["lambda1"] = cfg.lambda1;
    details["epsilon"] = cfg.epsilon;
    if (cfg.xi) details["xi"] = *cfg.xi;
    details["max_residual"] = result.max_residual;
    details["iterations_per_column"] = result.iterations_per_column;
  } else if (a.method == "spice") {
    if (!(a.lambda2 > 0.0)) throw BadParam("--lambda2 is required for spice");
    SpiceConfig cfg;
    cfg.lambda2 = a.lambda2;
    const SpiceResult result = spice_estimate(sample_covariance(panel), cfg);
    estimate = result.omega;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(result.omega.mat(),
                                                  Eigen::EigenvaluesOnly);
    details["lambda2"] = cfg.lambda2;
    details["iterations"] = result.sweeps;
    details["duality_gap"] = result.duality_gap;
    details["min_eigenvalue"] = es.eigenvalues().minCoeff();
  } else {
    throw BadParam("unknown method '" + a.method + "'");
  }

  write_csv_matrix(a.out, estimate.mat());
  json manifest =
      cli::make_manifest("estimate", details, 0,
                         {{a.input, cli::file_digest(a.input)}},
                         {{a.out, cli::file_digest(a.out)}});
  for (const auto& item : details.items()) manifest[item.key()] = item.value();
  cli::write_text_file(cli::manifest_path_for(a.out), manifest.dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------- cv ---

struct CvArgs {
  std::string input;
  bool transpose = false;
  std::string method;
  std::string target;
  int h1 = 10;
  int h2 = 10;
  std::string grid = "auto";
  std::uint64_t seed = 0;
  std::string out;
  double scad_a = 3.7;
  double alasso_eta = 1.0;
  double solver_tol = 1e-5;
  int max_iter = 20000;
  int threads = 0;
};

int run_cv(const CvArgs& a) {
  const TimeSeriesPanel panel = load_panel(a.input, a.transpose);
  const std::uint64_t seed = resolve_seed(a.seed);
  const GapBlockPlan plan = make_plan(panel.n(), a.h1, a.h2, seed);
  const TuningGrid grid = grid_from_flag(a.grid);

  const bool threshold_method = a.method == "hard" || a.method == "soft" ||
                                a.method == "scad" || a.method == "alasso";
  SelectResult sel;
  if (threshold_method) {
    if (a.target != "cov" && a.target != "corr") {
      throw BadParam("--target must be cov or corr for " + a.method);
    }
    sel = select_tau(panel, plan, grid,
                     rule_from_name(a.method, a.scad_a, a.alasso_eta),
                     a.target == "cov" ? CvTarget::covariance
                                       : CvTarget::correlation,
                     a.threads);
  } else if (a.method == "clime") {
    if (a.target != "prec") throw BadParam("--target must be prec for clime");
    ClimeConfig cfg;
    cfg.solver_tol = a.solver_tol;
    cfg.max_iter = a.max_iter;
    sel = select_lambda_precision(panel, plan, grid, cfg, true, a.threads);
  } else if (a.method == "spice") {
    if (a.target != "prec") throw BadParam("--target must be prec for spice");
    SpiceConfig cfg;
    sel = select_lambda_precision(panel, plan, grid, cfg, a.threads);
  } else {
    throw BadParam("unknown method '" + a.method + "'");
  }

  json config;
  config["method"] = a.method;
  config["target"] = a.target;
  config["h1"] = a.h1;
  config["h2"] = a.h2;
  config["grid"] = grid.values;
  json output =
      cli::make_manifest("cv", config, seed,
                         {{a.input, cli::file_digest(a.input)}}, {});
  output["selected"] = sel.selected;
  output["cv_curve"] = curve_json(sel);
  output["plan_digest"] = plan_digest(plan);
  emit_output(a.out, output.dump(2));
  if (!a.out.empty()) {
    json manifest = cli::make_manifest(
        "cv", config, seed, {{a.input, cli::file_digest(a.input)}},
        {{a.out, cli::file_digest(a.out)}});
    cli::write_text_file(cli::manifest_path_for(a.out), manifest.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------- bench ---

struct BenchArgs {
  std::string config_path;
  std::string out;
  bool emit_table = false;
  int threads = -1;  // -1 = use config value
};

void append_metric_rows(std::string& csv, const BenchConfig& cfg,
                        const MethodSummary& ms, size_t failures) {
  const std::string prefix =
      std::to_string(cfg.model) + "," + std::to_string(cfg.p) + "," +
      std::to_string(cfg.n) + "," + cli::alpha_to_string(cfg.alpha) + "," +
      method_name(ms.method) + ",";
  const std::string suffix =
      "," + std::to_string(ms.successes) + "," + std::to_string(failures);
  auto row = [&](const std::string& metric, const MetricSummary& s) {
    if (ms.successes == 0) {
      csv += prefix + metric + ",NA,NA" + suffix + "\n";
    } else {
      csv += prefix + metric + "," + cli::format_g17(s.mean) + "," +
             cli::format_g17(s.sd) + suffix + "\n";
    }
  };
  row("spectral", ms.spectral);
  row("frobenius", ms.frobenius);
  row("max", ms.max_elem);
  if (ms.tpr) row("tpr", *ms.tpr);
  if (ms.fpr) row("fpr", *ms.fpr);
  if (ms.sign_consistent) row("sign_consistent", *ms.sign_consistent);
}

std::string format_table(const BenchResult& result) {
  char buf[160];
  std::string text =
      "method           spectral          frobenius         max\n";
  for (const MethodSummary& ms : result.methods) {
    if (ms.successes == 0) {
      std::snprintf(buf, sizeof(buf), "%-16s %-17s %-17s %-17s\n",
                    method_name(ms.method).c_str(), "NA", "NA", "NA");
      text += buf;
      continue;
    }
    auto cell = [&](const MetricSummary& s) {
      char c[40];
      std::snprintf(c, sizeof(c), "%.3g(%.3g)", s.mean, s.sd);
      return std::string(c);
    };
    std::snprintf(buf, sizeof(buf), "%-16s %-17s %-17s %-17s",
                  method_name(ms.method).c_str(), cell(ms.spectral).c_str(),
                  cell(ms.frobenius).c_str(), cell(ms.max_elem).c_str());
    text += buf;
    if (ms.tpr && ms.fpr) {
      std::snprintf(buf, sizeof(buf), " tpr=%s fpr=%s",
                    cell(*ms.tpr).c_str(), cell(*ms.fpr).c_str());
      text += buf;
    }
    text += "\n";
  }
  return text;
}

int run_bench(const BenchArgs& a) {
  BenchConfig cfg = cli::load_bench_config(a.config_path);
  if (const auto env = cli::env_seed_override()) cfg.seed = *env;
  if (a.threads >= 0) cfg.threads = a.threads;
  const BenchResult result = run_benchmark(cfg);

  std::string csv =
      "model,p,n,alpha,method,metric,mean,sd,replications,failures\n";
  for (const MethodSummary& ms : result.methods) {
    append_metric_rows(csv, result.config, ms, result.failures.size());
  }
  cli::write_text_file(a.out, csv);

  json manifest = cli::make_manifest(
      "bench", cli::bench_config_to_json(result.config), result.config.seed,
      {{a.config_path, cli::file_digest(a.config_path)}},
      {{a.out, cli::file_digest(a.out)}});
  manifest["failures"] = result.failures;
  cli::write_text_file(cli::manifest_path_for(a.out), manifest.dump(2) + "\n");

  if (a.emit_table) std::cout << format_table(result);
  for (const std::string& f : result.failures) {
    std::cerr << "warning: " << f << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- rates ---

struct RatesArgs {
  int n = 0;
  int p = 0;
  std::string alpha;
  double mp = 1.0;
  double c0 = 1.0;
};

int run_rates(const RatesArgs& a) {
  RateInput inp;
  inp.n = a.n;
  inp.p = a.p;
  inp.alpha = cli::parse_alpha_string(a.alpha);
  inp.m_p = a.mp;
  const double tau = tau_prime(inp);
  const double lambda = lambda_prime(inp);
  const long f = block_size_f(inp, false);
  const long f_clime = block_size_f(inp, true);
  const double g = g_bound(a.n, f, PddSpec{inp.alpha, a.c0});

  // hand-rolled so numbers carry 17 significant digits
  std::string text = "{";
  text += "\"n\":" + std::to_string(a.n);
  text += ",\"p\":" + std::to_string(a.p);
  text += ",\"alpha\":\"" + cli::alpha_to_string(inp.alpha) + "\"";
  text += ",\"m_p\":" + cli::format_g17(a.mp);
  text += ",\"c0\":" + cli::format_g17(a.c0);
  text += ",\"tau_prime\":" + cli::format_g17(tau);
  text += ",\"lambda_prime\":" + cli::format_g17(lambda);
  text += ",\"f\":" + std::to_string(f);
  text += ",\"f_clime\":" + std::to_string(f_clime);
  text += ",\"g\":" + cli::format_g17(g);
  text += "}";
  std::cout << text << "\n";
  return 0;
}

// ------------------------------------------------------------- alpha-fit --

struct AlphaFitArgs {
  std::string input;
  bool transpose = false;
  int max_lag = 0;
  std::string mode = "envelope";
};

int run_alpha_fit(const AlphaFitArgs& a) {
  const TimeSeriesPanel panel = load_panel(a.input, a.transpose);
  AlphaFitMode mode;
  if (a.mode == "envelope") {
    mode = AlphaFitMode::envelope;
  } else if (a.mode == "per-series") {
    mode = AlphaFitMode::per_series;
  } else {
    throw BadParam("--mode must be envelope or per-series");
  }
  const AlphaFit fit = estimate_alpha(panel, a.max_lag, mode);
  std::string text = "{";
  text += "\"alpha_hat\":" + cli::format_g17(fit.alpha_hat);
  text += ",\"c_hat\":" + cli::format_g17(fit.c_hat);
  text += ",\"max_lag\":" + std::to_string(a.max_lag);
  text += ",\"mode\":\"" + a.mode + "\"";
  text += "}";
  std::cout << text << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covariance, correlation and precision estimation for "
               "polynomially dependent time-series panels"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "draw a model panel");
  c_sim->add_option("--model", sim.model, "model id 1..4")->required();
  c_sim->add_option("--p", sim.p, "panel dimension")->required();
  c_sim->add_option("--n", sim.n, "panel length")->required();
  c_sim->add_option("--alpha", sim.alpha, "decay exponent, or iid/inf")
      ->required();
  c_sim->add_option("--seed", sim.seed, "rng seed");
  c_sim->add_option("--out", sim.out, "output panel CSV")->required();
  c_sim->add_option("--n-terms", sim.n_terms, "exponential-sum terms");
  c_sim->add_option("--fit-tol", sim.fit_tol, "max relative fit error");

  EstimateArgs est;
  CLI::App* c_est = app.add_subcommand("estimate", "estimate from a panel");
  c_est->add_option("--input", est.input, "panel CSV (p rows x n cols)")
      ->required();
  c_est->add_flag("--transpose", est.transpose, "input is n x p");
  c_est->add_option("--method", est.method,
                    "sample|sample_inverse|hard|soft|scad|alasso|clime|spice")
      ->required();
  c_est->add_option("--target", est.target, "cov|corr (thresholding)");
  c_est->add_option("--out", est.out, "output matrix CSV")->required();
  c_est->add_option("--tau", est.tau, "threshold level");
  c_est->add_option("--scad-a", est.scad_a, "scad shape (> 2)");
  c_est->add_option("--alasso-eta", est.alasso_eta, "adaptive-lasso exponent");
  c_est->add_option("--lambda1", est.lambda1, "clime constraint level");
  c_est->add_option("--epsilon", est.epsilon,
                    "clime perturbation (number or 'auto')");
  c_est->add_option("--xi", est.xi, "clime post-threshold");
  c_est->add_option("--lambda2", est.lambda2, "spice penalty");
  c_est->add_option("--solver-tol", est.solver_tol, "clime solver tolerance");
  c_est->add_option("--max-iter", est.max_iter, "clime iteration cap");
  c_est->add_option("--threads", est.threads, "worker threads (0 = all)");

  CvArgs cv;
  CLI::App* c_cv = app.add_subcommand("cv", "gap-block cross-validation");
  c_cv->add_option("--input", cv.input, "panel CSV")->required();
  c_cv->add_flag("--transpose", cv.transpose, "input is n x p");
  c_cv->add_option("--method", cv.method,
                   "hard|soft|scad|alasso|clime|spice")->required();
  c_cv->add_option("--target", cv.target, "cov|corr|prec")->required();
  c_cv->add_option("--h1", cv.h1, "contiguous blocks (>= 4)");
  c_cv->add_option("--h2", cv.h2, "random blocks");
  c_cv->add_option("--grid", cv.grid, "auto or v1,v2,...");
  c_cv->add_option("--seed", cv.seed, "rng seed for random blocks");
  c_cv->add_option("--out", cv.out, "output JSON (default stdout)");
  c_cv->add_option("--scad-a", cv.scad_a, "scad shape");
  c_cv->add_option("--alasso-eta", cv.alasso_eta, "adaptive-lasso exponent");
  c_cv->add_option("--solver-tol", cv.solver_tol, "clime solver tolerance");
  c_cv->add_option("--max-iter", cv.max_iter, "clime iteration cap");
  c_cv->add_option("--threads", cv.threads, "worker threads (0 = all)");

  BenchArgs bench;
  CLI::App* c_bench = app.add_subcommand("bench", "replication benchmark");
  c_bench->add_option("--config", bench.config_path, "bench JSON config")
      ->required();
  c_bench->add_option("--out", bench.out, "results CSV")->required();
  c_bench->add_flag("--emit-table", bench.emit_table, "print a text table");
  c_bench->add_option("--threads", bench.threads, "override config threads");

  RatesArgs rates;
  CLI::App* c_rates = app.add_subcommand("rates", "rate formulas as JSON");
  c_rates->add_option("--n", rates.n, "sample size")->required();
  c_rates->add_option("--p", rates.p, "dimension")->required();
  c_rates->add_option("--alpha", rates.alpha, "decay exponent, or iid/inf")
      ->required();
  c_rates->add_option("--mp", rates.mp, "precision l1 bound M_p");
  c_rates->add_option("--c0", rates.c0, "dependence constant C0");

  AlphaFitArgs afit;
  CLI::App* c_afit = app.add_subcommand("alpha-fit",
                                        "estimate the decay exponent");
  c_afit->add_option("--input", afit.input, "panel CSV")->required();
  c_afit->add_flag("--transpose", afit.transpose, "input is n x p");
  c_afit->add_option("--max-lag", afit.max_lag, "largest lag used (>= 3)")
      ->required();
  c_afit->add_option("--mode", afit.mode, "envelope|per-series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_est->parsed()) return run_estimate(est);
    if (c_cv->parsed()) return run_cv(cv);
    if (c_bench->parsed()) return run_bench(bench);
    if (c_rates->parsed()) return run_rates(rates);
    if (c_afit->parsed()) return run_alpha_fit(afit);
    return 1;
  } catch (const Error& e) {
    std::cerr << cli::error_json(e, command).dump() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << R"({"error":"Internal","message":")" << e.what() << "\"}\n";
    return 2;
  }
}
