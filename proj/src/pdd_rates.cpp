#include "pddcov/pdd_rates.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "pddcov/errors.hpp"

namespace pddcov {

namespace {

void validate(const RateInput& inp) {
  if (inp.n < 2 || inp.p < 2) {
    throw BadInput("rate formulas need n >= 2 and p >= 2");
  }
  if (!is_iid_alpha(inp.alpha) && !(inp.alpha > 0.0)) {
    throw BadInput("alpha must be positive or the i.i.d. sentinel");
  }
  if (!(inp.m_p >= 1.0)) throw BadInput("m_p must be >= 1");
}

}  // namespace

double tau_prime(const RateInput& inp) {
  validate(inp);
  const double n = inp.n;
  const double lp = std::log(static_cast<double>(inp.p));
  const double ln = std::log(n);
  const double a = inp.alpha;
  if (is_iid_alpha(a)) return std::sqrt(lp / n);
  if (a < 1.0) {
    return std::pow(n, -a / 3.0) * std::pow(lp, -1.0 / 6.0) *
           std::sqrt(lp + (1.0 - 2.0 * a / 3.0) * ln);
  }
  if (a == 1.0) {
    return std::pow(n, -1.0 / 3.0) * std::pow(lp, -1.0 / 6.0) *
           std::sqrt(lp + ln / 3.0) * std::pow(ln, 1.0 / 3.0);
  }
  const double u = 1.0 + 2.0 * a;
  return std::pow(n, -a / u) * std::pow(lp, -1.0 / (2.0 * u)) *
         std::sqrt(lp + ln / u);
}

double lambda_prime(const RateInput& inp) {
  validate(inp);
  const double n = inp.n;
  const double lp = std::log(static_cast<double>(inp.p));
  const double ln = std::log(n);
  const double lm = std::log(inp.m_p);
  const double a = inp.alpha;
  if (is_iid_alpha(a)) return std::sqrt(lp / n);
  if (a < 1.0) {
    return std::pow(inp.m_p, 2.0 / 3.0) * std::pow(n, -a / 3.0) *
           std::pow(lp, -1.0 / 6.0) *
           std::sqrt(lp + (1.0 - 2.0 * a / 3.0) * ln + 4.0 / 3.0 * lm);
  }
  if (a == 1.0) {
    return std::pow(inp.m_p, 2.0 / 3.0) * std::pow(n, -1.0 / 3.0) *
           std::pow(lp, -1.0 / 6.0) *
           std::sqrt(lp + ln / 3.0 + 4.0 / 3.0 * lm) * std::pow(ln, 1.0 / 3.0);
  }
  const double u = 1.0 + 2.0 * a;
  return std::pow(inp.m_p, 2.0 / u) * std::pow(n, -a / u) *
         std::pow(lp, -1.0 / (2.0 * u)) * std::sqrt(lp + ln / u + 4.0 / u * lm);
}

long block_size_f(const RateInput& inp, bool for_clime) {
  validate(inp);
  const double n = inp.n;
  const double lp = std::log(static_cast<double>(inp.p));
  const double ln = std::log(n);
  const double a = inp.alpha;
  if (is_iid_alpha(a)) return 1;

  double f0;
  if (a < 1.0) {
    f0 = std::pow(n, 1.0 - 2.0 * a / 3.0) * std::pow(lp, -1.0 / 3.0);
  } else if (a == 1.0) {
    f0 = std::pow(n * ln * ln, 1.0 / 3.0) * std::pow(lp, -1.0 / 3.0);
  } else {
    const double u = 1.0 + 2.0 * a;
    f0 = std::pow(n, 1.0 / u) * std::pow(lp, -1.0 / u);
  }
  if (for_clime) {
    f0 *= (a <= 1.0) ? std::pow(inp.m_p, 4.0 / 3.0)
                     : std::pow(inp.m_p, 4.0 / (1.0 + 2.0 * a));
  }
  const double rounded = std::round(f0);
  if (rounded > n) {
    throw OutOfRange("block size " + std::to_string(rounded) + " exceeds n=" +
                     std::to_string(inp.n) +
                     " (rate not o(1) at these settings)");
  }
  return std::max(1L, static_cast<long>(rounded));
}

double g_bound(long n, long f, const PddSpec& spec) {
  if (f < 1 || f > n) throw BadInput("g_bound needs 1 <= f <= n");
  if (!(spec.c0 > 0.0)) throw BadInput("c0 must be positive");
  const double a = spec.alpha;
  if (is_iid_alpha(a)) return 0.0;
  if (!(a > 0.0)) throw BadInput("alpha must be positive");
  const double nf = static_cast<double>(n) / static_cast<double>(f);
  if (a == 1.0) {
    return 2.0 * spec.c0 / f * (1.0 + std::log(nf));
  }
  return 2.0 * spec.c0 * std::pow(static_cast<double>(f), -a) *
         (std::pow(nf, 1.0 - a) - a) / (1.0 - a);
}

AlphaFit estimate_alpha(const TimeSeriesPanel& x, int max_lag,
                        AlphaFitMode mode) {
  if (max_lag < 3) throw BadLag("max_lag must be >= 3");
  if (max_lag > x.n() - 1) throw BadLag("max_lag must be <= n-1");

  const int p = x.p();
  std::vector<std::vector<double>> rho(p);
  for (int i = 0; i < p; ++i) {
    std::vector<double> series(x.data().row(i).begin(), x.data().row(i).end());
    rho[i] = sample_autocorrelation(series, max_lag);
  }

  // collect (log t, log |rho|) points per mode
  std::vector<double> lx, ly;
  constexpr double kFloor = 1e-8;
  if (mode == AlphaFitMode::envelope) {
    for (int t = 1; t <= max_lag; ++t) {
      double m = 0.0;
      for (int i = 0; i < p; ++i) m = std::max(m, std::fabs(rho[i][t]));
      if (m < kFloor) continue;
      lx.push_back(std::log(static_cast<double>(t)));
      ly.push_back(std::log(m));
    }
  } else {
    for (int i = 0; i < p; ++i) {
      for (int t = 1; t <= max_lag; ++t) {
        const double m = std::fabs(rho[i][t]);
        if (m < kFloor) continue;
        lx.push_back(std::log(static_cast<double>(t)));
        ly.push_back(std::log(m));
      }
    }
  }
  if (lx.size() < 3) {
    throw TooFewLags("only " + std::to_string(lx.size()) +
                     " usable lags for the log-log fit (need 3)");
  }

  // OLS slope/intercept
  const double n = static_cast<double>(lx.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw TooFewLags("log-lag design is degenerate");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return AlphaFit{-slope, std::exp(intercept)};
}

IrrepReport irrepresentability(
    const SymmetricMatrix& r,
    const std::vector<std::pair<int, int>>& omega_support) {
  const int p = r.dim();
  if (p > 50) {
    throw TooLarge("irrepresentability is limited to p <= 50 (Gamma is p^2 x p^2)");
  }

  std::set<long> support_idx;  // column-major flat index i + j*p
  std::vector<int> row_count(p, 0);
  for (const auto& [i, j] : omega_support) {
    if (i < 0 || i >= p || j < 0 || j >= p) {
      throw BadInput("support index out of range");
    }
    if (support_idx.insert(static_cast<long>(i) + static_cast<long>(j) * p)
            .second) {
      ++row_count[i];
    }
  }

  IrrepReport rep;
  rep.kappa_R = matrix_norm(r, NormKind::l1);
  rep.d = row_count.empty()
              ? 0
              : *std::max_element(row_count.begin(), row_count.end());

  const SymmetricMatrix gamma = kron(r, r);
  const long pp = static_cast<long>(p) * p;
  std::vector<long> s(support_idx.begin(), support_idx.end());
  std::vector<long> sc;
  sc.reserve(pp - static_cast<long>(s.size()));
  for (long k = 0; k < pp; ++k) {
    if (!support_idx.count(k)) sc.push_back(k);
  }

  const long ns = static_cast<long>(s.size());
  Eigen::MatrixXd gss(ns, ns);
  for (long a = 0; a < ns; ++a) {
    for (long b = 0; b < ns; ++b) {
      gss(a, b) = gamma.mat()(s[static_cast<size_t>(a)],
                              s[static_cast<size_t>(b)]);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gss);
  if (!lu.isInvertible()) {
    throw SingularGammaSS("Gamma_SS is singular");
  }
  const Eigen::MatrixXd gss_inv = lu.inverse();
  rep.kappa_Gamma = gss_inv.cwiseAbs().colwise().sum().maxCoeff();

  if (sc.empty()) {
    rep.beta = 1.0;  // vacuous maximum
    return rep;
  }
  Eigen::MatrixXd ges(static_cast<long>(sc.size()), ns);
  for (size_t a = 0; a < sc.size(); ++a) {
    for (long b = 0; b < ns; ++b) {
      ges(static_cast<long>(a), b) =
          gamma.mat()(sc[a], s[static_cast<size_t>(b)]);
    }
  }
  const Eigen::MatrixXd m = ges * gss_inv;
  rep.beta = 1.0 - m.cwiseAbs().rowwise().sum().maxCoeff();
  return rep;
}

}  // namespace pddcov
