#include "htga/exact.hpp"

#include <cassert>
#include <cmath>

#include "htga/math.hpp"
#include "htga/power_law.hpp"

namespace htga {

namespace {

// log(1 - (1 - q)^lambda) given log q, robust when q underflows a double.
double log_one_minus_pow1m(double log_q, double lambda) {
  if (log_q == kNegInf) return kNegInf;
  if (log_q >= 0.0) return 0.0;
  double q = std::exp(log_q);
  if (q > 1e-280) return log1mexp(lambda * std::log1p(-q));
  double log_lq = std::log(lambda) + log_q;
  if (log_lq < -700.0) return log_lq;  // 1-(1-q)^lambda ~ lambda q here
  return log1mexp(-std::exp(log_lq));
}

void validate_problem(uint32_t n, uint32_t k) {
  if (k < 2 || k > n) throw std::invalid_argument("escape probability: need 2 <= k <= n");
}

}  // namespace

double log_q_m(uint32_t n, uint32_t k, uint32_t ell) {
  validate_problem(n, k);
  if (ell > n) throw std::invalid_argument("log_q_m: ell exceeds n");
  if (ell < k) return kNegInf;
  return log_choose((double)n - k, (double)ell - k) - log_choose((double)n, (double)ell);
}

double log_p_ell(uint32_t n, double p, uint32_t ell) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("log_p_ell: p outside [0,1]");
  if (ell > n) throw std::invalid_argument("log_p_ell: ell exceeds n");
  if (p == 0.0) return ell == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return ell == n ? 0.0 : kNegInf;
  return log_choose((double)n, (double)ell) + ell * std::log(p) +
         (double)(n - ell) * std::log1p(-p);
}

double escape_log_p_static(uint32_t n, uint32_t k, double p, double c, double lambda_m,
                           double lambda_c) {
  validate_problem(n, k);
  if (!(p >= 0.0 && p <= 1.0) || !(c >= 0.0 && c <= 1.0))
    throw std::invalid_argument("escape_log_p_static: rates outside [0,1]");
  if (!(lambda_m >= 1.0) || !(lambda_c >= 1.0))
    throw std::invalid_argument("escape_log_p_static: population sizes must be >= 1");

  if (p == 0.0 || c == 0.0) return kNegInf;  // ell stays below k / crossover inert

  const double log_c = std::log(c);
  const double log_1mc = std::log1p(-c);  // -inf at c == 1 handled per term

  auto crossover_term = [&](uint32_t ell) {
    double log_qc = k * log_c + (ell > k ? (double)(ell - k) * log_1mc : 0.0);
    return log_one_minus_pow1m(log_qc, lambda_c);
  };

  if (p == 1.0) {
    // Degenerate flip count: ell = n deterministically, and q_m(n) = 1.
    return crossover_term(n);
  }

  const double log_p_ratio = std::log(p) - std::log1p(-p);
  const double mean_ell = (double)n * p;

  double lp = log_p_ell(n, p, k);
  double lqm = -log_choose((double)n, (double)k);  // log q_m(k)
  LogSumExp acc;
  double prev_term = kNegInf;
  for (uint32_t ell = k; ell <= n; ++ell) {
    if (ell > k) {
      lp += std::log((double)(n - ell + 1) / ell) + log_p_ratio;
      lqm += std::log((double)ell / (ell - k));
      if (lqm > 0.0) lqm = 0.0;  // q_m(n) = 1; the recurrence may drift past it
    }
    double log_pm = (ell == k || ell >= 2 * k) ? log_one_minus_pow1m(lqm, lambda_m)
                                               : lambda_m * lqm;
    double term = lp + log_pm + crossover_term(ell);
    acc.add(term);
    // Past the binomial bulk and both selection regimes, terms only decay.
    if (ell >= 2 * k && (double)ell > mean_ell && term <= prev_term &&
        term < acc.log_max() - 60.0) {
      break;
    }
    prev_term = term;
  }
  return acc.value();
}

HeavyTailedExact escape_heavy_tailed(const JumpParams& params, const HyperParams& hp,
                                     double tail_tol) {
  hp.validate();
  const uint32_t n = params.n, k = params.k;
  constexpr uint64_t kTermCap = 2000000;

  PowerLaw law_s(hp.beta_s, hp.u_s);
  PowerLaw law_lambda(hp.beta_lambda, hp.u_lambda);

  uint64_t s_end = hp.u_s;
  if (s_end > kTermCap) {
    // Truncation is admissible because every conditional escape probability
    // is at most one, so dropped mass bounds the dropped contribution.
    s_end = kTermCap;
    if (law_s.interval_mass(s_end + 1, hp.u_s) > tail_tol)
      throw TruncationError("escape_heavy_tailed: u_s tail mass above tolerance");
  }
  uint64_t lambda_end = hp.u_lambda;
  if (lambda_end > kTermCap) {
    lambda_end = kTermCap;
    if (law_lambda.interval_mass(lambda_end + 1, hp.u_lambda) > tail_tol)
      throw TruncationError("escape_heavy_tailed: u_lambda tail mass above tolerance");
  }

  // Per-lambda weights are shared by every s.
  std::vector<double> lambda_pmf(lambda_end);
  for (uint64_t i = 1; i <= lambda_end; ++i) lambda_pmf[i - 1] = law_lambda.pmf(i);

  double total = 0.0;
  std::vector<double> p_ell_lin, log_1m_qm, log_qm_v, log_1m_qc;
  for (uint64_t s = 1; s <= s_end; ++s) {
    double ps = law_s.pmf(s);
    double rate = std::min(1.0, std::sqrt((double)s / n));
    double log_c = std::log(rate);
    double log_1mc = std::log1p(-rate);

    // Cache the per-ell pieces once per s; only the lambda exponent varies.
    uint32_t ell_begin = k, ell_count = n - k + 1;
    p_ell_lin.assign(ell_count, 0.0);
    log_1m_qm.assign(ell_count, 0.0);
    log_qm_v.assign(ell_count, 0.0);
    log_1m_qc.assign(ell_count, 0.0);
    if (rate == 1.0) {
      ell_begin = n;
      ell_count = 1;
      p_ell_lin[0] = 1.0;
      log_qm_v[0] = 0.0;
      log_1m_qm[0] = kNegInf;
      log_1m_qc[0] = std::log1p(-std::exp(k * log_c + (double)(n - k) * log_1mc));
    } else {
      double lp = log_p_ell(n, rate, k);
      double lqm = -log_choose((double)n, (double)k);
      double log_p_ratio = std::log(rate) - std::log1p(-rate);
      for (uint32_t i = 0; i < ell_count; ++i) {
        uint32_t ell = k + i;
        if (i > 0) {
          lp += std::log((double)(n - ell + 1) / ell) + log_p_ratio;
          lqm += std::log((double)ell / (ell - k));
          if (lqm > 0.0) lqm = 0.0;  // q_m(n) = 1; the recurrence may drift past it
        }
        p_ell_lin[i] = std::exp(lp);
        log_qm_v[i] = lqm;
        log_1m_qm[i] = log1mexp(lqm);
        double log_qc = k * log_c + (ell > k ? (double)(ell - k) * log_1mc : 0.0);
        log_1m_qc[i] = log_qc == kNegInf ? 0.0 : log1mexp(log_qc);
      }
    }

    double inner = 0.0;
    for (uint64_t li = 0; li < lambda_end; ++li) {
      double lambda = (double)(li + 1);
      double p_static = 0.0;
      for (uint32_t i = 0; i < ell_count; ++i) {
        if (p_ell_lin[i] == 0.0) continue;
        uint32_t ell = ell_begin + i;
        double pm;
        if (ell == k || ell >= 2 * k) {
          pm = log_1m_qm[i] == kNegInf ? 1.0 : -std::expm1(lambda * log_1m_qm[i]);
        } else {
          pm = std::exp(lambda * log_qm_v[i]);
        }
        double pc = -std::expm1(lambda * log_1m_qc[i]);
        p_static += p_ell_lin[i] * pm * pc;
      }
      inner += lambda_pmf[li] * p_static;
    }
    total += ps * inner;
  }

  double e_lambda = law_lambda.expectation();
  double log_p = total > 0.0 ? std::log(total) : kNegInf;
  return {log_p, e_lambda, 2.0 * e_lambda / total};
}

StaticParams static_params_for_delta(uint32_t n, uint32_t k, double delta) {
  validate_problem(n, k);
  double root = std::sqrt((double)k / n);
  double p = std::exp2(delta) * root;
  double c = std::exp2(-delta) * root;
  // The grid edge lands exactly on 1 up to rounding noise.
  if (p > 1.0 && p < 1.0 + 1e-9) p = 1.0;
  if (c > 1.0 && c < 1.0 + 1e-9) c = 1.0;
  if (p > 1.0 || c > 1.0)
    throw std::invalid_argument("static_params_for_delta: delta outside the valid range");
  double lambda = std::max(1.0, std::round(std::pow(std::sqrt((double)n / k), (double)k)));
  uint64_t lam_int = lambda >= 9.2e18 ? ~0ULL : (uint64_t)lambda;
  return {p, c, lam_int, lam_int};
}

std::vector<double> delta_grid(uint32_t n, uint32_t k) {
  double bound = std::log2(std::sqrt((double)n / k));
  auto hi = (int64_t)std::floor(2.0 * bound + 1e-6);
  std::vector<double> grid;
  for (int64_t i = -hi; i <= hi; ++i) grid.push_back(0.5 * i);
  return grid;
}

std::vector<ExactPoint> runtime_ratio_sweep(uint32_t n, uint32_t k) {
  double root = std::sqrt((double)k / n);
  double lambda = std::max(1.0, std::round(std::pow(std::sqrt((double)n / k), (double)k)));
  std::vector<ExactPoint> points;
  double log_p_base = kNegInf;
  for (double delta : delta_grid(n, k)) {
    ExactPoint pt;
    pt.n = n;
    pt.k = k;
    pt.delta = delta;
    pt.p = std::min(1.0, std::exp2(delta) * root);
    pt.c = std::min(1.0, std::exp2(-delta) * root);
    pt.lambda = lambda;
    pt.log_p_escape = escape_log_p_static(n, k, pt.p, pt.c, lambda, lambda);
    pt.expected_evals = 2.0 * lambda * std::exp(-pt.log_p_escape);
    points.push_back(pt);
  }
  for (const auto& pt : points) {
    if (pt.delta == 0.0) log_p_base = pt.log_p_escape;
  }
  for (auto& pt : points) pt.ratio = std::exp(log_p_base - pt.log_p_escape);
  return points;
}

void write_exact_csv_header(std::ostream& os) {
  os << "n,k,delta,p,c,lambda,log_P,expected_evals,ratio\n";
}

void write_exact_csv_row(std::ostream& os, const ExactPoint& pt) {
  char buf[360];
  std::snprintf(buf, sizeof buf, "%u,%u,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.n,
                pt.k, pt.delta, pt.p, pt.c, pt.lambda, pt.log_p_escape, pt.expected_evals,
                pt.ratio);
  os << buf;
}

}  // namespace htga
