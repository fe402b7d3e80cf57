#include "pddcov/bench.hpp"

#include <algorithm>
#include <cmath>

#include "pddcov/errors.hpp"
#include "pddcov/parallel.hpp"
#include "pddcov/rng.hpp"
#include "pddcov/simulate.hpp"
#include "pddcov/threshold.hpp"

namespace pddcov {

namespace {

struct RepOutcome {
  bool failed = false;
  std::string error;
  // per method, aligned with the config's method list; nullopt = N/A
  std::vector<std::optional<EvalReport>> reports;
};

bool covariance_method(BenchMethod m) {
  switch (m) {
    case BenchMethod::sample:
    case BenchMethod::hard:
    case BenchMethod::soft:
    case BenchMethod::scad:
    case BenchMethod::adaptive_lasso:
      return true;
    default:
      return false;
  }
}

std::optional<ThresholdRule> rule_for(BenchMethod m) {
  switch (m) {
    case BenchMethod::hard:
      return ThresholdRule{ThresholdKind::hard, 3.7, 1.0};
    case BenchMethod::soft:
      return ThresholdRule{ThresholdKind::soft, 3.7, 1.0};
    case BenchMethod::scad:
      return ThresholdRule{ThresholdKind::scad, 3.7, 1.0};
    case BenchMethod::adaptive_lasso:
      return ThresholdRule{ThresholdKind::adaptive_lasso, 3.7, 1.0};
    default:
      return std::nullopt;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng(seed, stream).next_u64();
}

RepOutcome run_replication(const BenchConfig& cfg, const ExpSumFit& fit,
                           const ModelMatrices& mm,
                           const TuningGrid& grid, int rep) {
  const std::uint64_t r = static_cast<std::uint64_t>(rep);
  const TimeSeriesPanel panel =
      simulate_pdd(ModelSpec{cfg.model, cfg.p}, fit, cfg.n,
                   derive_seed(cfg.seed, 2 * r));
  const GapBlockPlan plan =
      make_plan(cfg.n, cfg.h1, cfg.h2, derive_seed(cfg.seed, 2 * r + 1));
  const SymmetricMatrix sigma_hat = sample_covariance(panel);
  const bool precision_target = cfg.model >= 3;
  const SymmetricMatrix& truth = precision_target ? mm.omega : mm.sigma;
  const bool banded_truth = cfg.model == 2 || cfg.model == 4;

  RepOutcome out;
  for (BenchMethod method : cfg.methods) {
    const bool support_known =
        banded_truth && method != BenchMethod::sample &&
        method != BenchMethod::sample_inverse;
    switch (method) {
      case BenchMethod::sample: {
        out.reports.push_back(evaluate(sigma_hat, truth, support_known));
        break;
      }
      case BenchMethod::hard:
      case BenchMethod::soft:
      case BenchMethod::scad:
      case BenchMethod::adaptive_lasso: {
        const ThresholdRule rule = *rule_for(method);
        const SelectResult sel = select_tau(panel, plan, grid, rule,
                                            CvTarget::covariance, 1);
        const SymmetricMatrix est =
            threshold_covariance(sigma_hat, sel.selected, rule);
        out.reports.push_back(evaluate(est, truth, support_known));
        break;
      }
      case BenchMethod::sample_inverse: {
        try {
          out.reports.push_back(
              evaluate(inverse(sigma_hat), truth, support_known));
        } catch (const SingularMatrix&) {
          out.reports.push_back(std::nullopt);  // Table-style N/A cell
        }
        break;
      }
      case BenchMethod::clime: {
        ClimeConfig cv_cfg;
        cv_cfg.solver_tol = cfg.cv_solver_tol;
        cv_cfg.max_iter = cfg.cv_max_iter;
        const SelectResult sel =
            select_lambda_precision(panel, plan, grid, cv_cfg, true, 1);
        ClimeConfig final_cfg;
        final_cfg.lambda1 = sel.selected;
        final_cfg.epsilon = default_epsilon(cfg.n);
        // the default 1e-7 stability tolerance buys nothing at statistical
        // scales and costs an order of magnitude in iterations
        final_cfg.solver_tol = 1e-6;
        final_cfg.max_iter = cfg.cv_max_iter;
        const ClimeResult est = clime_estimate(sigma_hat, final_cfg);
        out.reports.push_back(evaluate(est.omega, truth, support_known));
        break;
      }
      case BenchMethod::spice: {
        SpiceConfig spice_cfg;
        const SelectResult sel =
            select_lambda_precision(panel, plan, grid, spice_cfg, 1);
        spice_cfg.lambda2 = sel.selected;
        const SpiceResult est = spice_estimate(sigma_hat, spice_cfg);
        out.reports.push_back(evaluate(est.omega, truth, support_known));
        break;
      }
    }
  }
  return out;
}

}  // namespace

EvalReport evaluate(const SymmetricMatrix& estimate,
                    const SymmetricMatrix& truth,
                    bool off_diagonal_support_known) {
  if (estimate.dim() != truth.dim()) {
    throw DimMismatch("estimate and truth dimensions differ");
  }
  const DenseMatrix diff = estimate.mat() - truth.mat();
  EvalReport rep;
  rep.spectral_loss = matrix_norm(SymmetricMatrix(
      ((diff + diff.transpose()) / 2.0).eval()), NormKind::spectral);
  rep.frobenius_loss = diff.norm();
  rep.max_loss = diff.cwiseAbs().maxCoeff();

  const int p = truth.dim();
  int true_nonzero = 0;
  int true_zero = 0;
  int detected_nonzero = 0;
  int false_detect = 0;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < j; ++i) {
      if (truth(i, j) != 0.0) {
        ++true_nonzero;
        if (estimate(i, j) != 0.0) ++detected_nonzero;
      } else {
        ++true_zero;
        if (estimate(i, j) != 0.0) ++false_detect;
      }
    }
  }
  if (off_diagonal_support_known && true_zero > 0 && true_nonzero > 0) {
    rep.tpr = static_cast<double>(detected_nonzero) / true_nonzero;
    rep.fpr = static_cast<double>(false_detect) / true_zero;
    bool consistent = true;
    for (int j = 0; j < p && consistent; ++j) {
      for (int i = 0; i <= j; ++i) {
        const double t = truth(i, j);
        if (t != 0.0 &&
            !(estimate(i, j) != 0.0 &&
              std::signbit(estimate(i, j)) == std::signbit(t))) {
          consistent = false;
          break;
        }
      }
    }
    rep.sign_consistent = consistent;
  }
  return rep;
}

std::string method_name(BenchMethod m) {
  switch (m) {
    case BenchMethod::sample: return "sample";
    case BenchMethod::hard: return "hard";
    case BenchMethod::soft: return "soft";
    case BenchMethod::scad: return "scad";
    case BenchMethod::adaptive_lasso: return "alasso";
    case BenchMethod::sample_inverse: return "sample_inverse";
    case BenchMethod::clime: return "clime";
    case BenchMethod::spice: return "spice";
  }
  throw BadParam("unknown method");
}

BenchMethod parse_method(const std::string& name) {
  for (BenchMethod m :
       {BenchMethod::sample, BenchMethod::hard, BenchMethod::soft,
        BenchMethod::scad, BenchMethod::adaptive_lasso,
        BenchMethod::sample_inverse, BenchMethod::clime, BenchMethod::spice}) {
    if (method_name(m) == name) return m;
  }
  throw BadParam("unknown method '" + name + "'");
}

std::vector<BenchMethod> default_methods(int model) {
  if (model == 1 || model == 2) {
    return {BenchMethod::sample, BenchMethod::hard, BenchMethod::soft,
            BenchMethod::scad, BenchMethod::adaptive_lasso};
  }
  if (model == 3 || model == 4) {
    return {BenchMethod::sample_inverse, BenchMethod::clime,
            BenchMethod::spice};
  }
  throw BadParam("model must be 1, 2, 3 or 4");
}

double pairwise_sum(const std::vector<double>& values, size_t lo, size_t hi) {
  const size_t len = hi - lo;
  if (len <= 8) {
    double acc = 0.0;
    for (size_t i = lo; i < hi; ++i) acc += values[i];
    return acc;
  }
  const size_t mid = lo + len / 2;
  return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  const size_t m = values.size();
  s.mean = pairwise_sum(values, 0, m) / static_cast<double>(m);
  if (m < 2) return s;
  std::vector<double> sq(m);
  for (size_t i = 0; i < m; ++i) {
    const double d = values[i] - s.mean;
    sq[i] = d * d;
  }
  s.sd = std::sqrt(pairwise_sum(sq, 0, m) / static_cast<double>(m - 1));
  return s;
}

BenchResult run_benchmark(const BenchConfig& cfg) {
  if (cfg.replications < 1) throw BadParam("replications must be >= 1");
  BenchConfig resolved = cfg;
  if (resolved.methods.empty()) resolved.methods = default_methods(cfg.model);
  if (resolved.grid.values.empty()) resolved.grid = default_grid();
  for (BenchMethod m : resolved.methods) {
    const bool cov = covariance_method(m);
    const bool cov_model = cfg.model == 1 || cfg.model == 2;
    if (cov != cov_model) {
      throw BadParam("method '" + method_name(m) +
                     "' does not apply to model " + std::to_string(cfg.model));
    }
  }

  const ModelMatrices mm = build_model(ModelSpec{resolved.model, resolved.p});
  const ExpSumFit fit = std::isinf(resolved.alpha)
                            ? ExpSumFit::iid_sentinel(resolved.n)
                            : fit_exp_sum(resolved.alpha, resolved.n);

  std::vector<RepOutcome> outcomes(
      static_cast<size_t>(resolved.replications));
  parallel_for(resolved.replications, resolved.threads, [&](int rep) {
    RepOutcome& slot = outcomes[static_cast<size_t>(rep)];
    try {
      slot = run_replication(resolved, fit, mm, resolved.grid, rep);
    } catch (const Error& e) {
      slot.failed = true;
      slot.error = std::string(e.code()) + ": " + e.what();
    }
  });

  BenchResult result;
  result.config = resolved;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].failed) {
      result.failures.push_back("rep " + std::to_string(i) + ": " +
                                outcomes[i].error);
    }
  }
  if (5 * result.failures.size() >= outcomes.size()) {
    std::string detail;
    for (const std::string& f : result.failures) detail += "\n  " + f;
    throw BenchAborted(std::to_string(result.failures.size()) + " of " +
                       std::to_string(outcomes.size()) +
                       " replications failed:" + detail);
  }

  for (size_t mi = 0; mi < resolved.methods.size(); ++mi) {
    MethodSummary ms;
    ms.method = resolved.methods[mi];
    std::vector<double> spectral, frob, maxl, tpr, fpr, sign;
    for (const RepOutcome& rep : outcomes) {
      if (rep.failed) continue;
      const std::optional<EvalReport>& er = rep.reports[mi];
      if (!er) {
        ++ms.na_count;
        continue;
      }
      ++ms.successes;
      spectral.push_back(er->spectral_loss);
      frob.push_back(er->frobenius_loss);
      maxl.push_back(er->max_loss);
      if (er->tpr) tpr.push_back(*er->tpr);
      if (er->fpr) fpr.push_back(*er->fpr);
      if (er->sign_consistent) sign.push_back(*er->sign_consistent ? 1.0 : 0.0);
    }
    ms.spectral = summarize(spectral);
    ms.frobenius = summarize(frob);
    ms.max_elem = summarize(maxl);
    if (!tpr.empty()) ms.tpr = summarize(tpr);
    if (!fpr.empty()) ms.fpr = summarize(fpr);
    if (!sign.empty()) ms.sign_consistent = summarize(sign);
    result.methods.push_back(std::move(ms));
  }
  return result;
}

}  // namespace pddcov
