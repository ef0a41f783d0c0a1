#include <doctest.h>

#include <bit>
#include <cmath>
#include <sstream>
#include <vector>

#include "htga/exact.hpp"
#include "htga/math.hpp"
#include "htga/power_law.hpp"
#include "fig2_expected.hpp"

using namespace htga;

namespace {

// Enumeration oracle: of all C(n, ell) flip sets, count those covering a fixed
// set of k positions. Exact 64-bit arithmetic for n <= 24.
double log_q_m_enumeration(uint32_t n, uint32_t k, uint32_t ell) {
  uint64_t covering = 0, total = 0;
  uint32_t zero_mask = (1u << k) - 1;  // designated zero-bits
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if ((uint32_t)std::popcount(mask) != ell) continue;
    ++total;
    covering += (mask & zero_mask) == zero_mask;
  }
  if (covering == 0) return kNegInf;
  return std::log((double)covering) - std::log((double)total);
}

// High-precision direct evaluation of log C(n, k) for the large anchor cases:
// sum of logs in long double, exact enough for a 1e-10 relative check.
double log_choose_direct(uint64_t n, uint64_t k) {
  long double acc = 0.0L;
  for (uint64_t i = 0; i < k; ++i) {
    acc += std::log((long double)(n - i)) - std::log((long double)(i + 1));
  }
  return (double)acc;
}

}  // namespace

TEST_SUITE_BEGIN("exact");

TEST_CASE("log_q_m pinned small values") {
  CHECK(log_q_m(4, 2, 2) == doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
  CHECK(log_q_m(8, 3, 8) == 0.0);  // forced full flip
  CHECK(log_q_m(10, 4, 3) == kNegInf);
  CHECK_THROWS_AS(log_q_m(10, 4, 11), std::invalid_argument);
}

TEST_CASE("log_q_m equals exhaustive enumeration for all n <= 12, k <= 4") {
  for (uint32_t n = 4; n <= 12; ++n) {
    for (uint32_t k = 2; k <= 4 && k <= n; ++k) {
      for (uint32_t ell = 0; ell <= n; ++ell) {
        double oracle = log_q_m_enumeration(n, k, ell);
        double got = log_q_m(n, k, ell);
        if (oracle == kNegInf) {
          CHECK(got == kNegInf);
        } else if (oracle == 0.0) {
          CHECK(std::fabs(got) < 1e-12);
        } else {
          CHECK(got == doctest::Approx(oracle).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("log_q_m full-scale anchor against direct high-precision evaluation") {
  // q_m(16) at n = 2^20, k = 16 collapses to 1 / C(2^20, 16).
  double direct = -log_choose_direct(1 << 20, 16);
  CHECK(log_q_m(1 << 20, 16, 16) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("log_p_ell pinned values and edge rates") {
  CHECK(log_p_ell(10, 0.0, 0) == 0.0);
  CHECK(log_p_ell(10, 0.0, 1) == kNegInf);
  CHECK(log_p_ell(10, 1.0, 10) == 0.0);
  CHECK(log_p_ell(10, 1.0, 9) == kNegInf);
  CHECK(log_p_ell(4, 0.5, 2) == doctest::Approx(std::log(6.0 / 16.0)).epsilon(1e-13));
}

TEST_CASE("log_p_ell at n = 2^20 near the mean") {
  const uint32_t n = 1 << 20, ell = 2048;
  const double p = 1.0 / 512.0;
  double direct = log_choose_direct(n, ell) + ell * std::log(p) +
                  (double)(n - ell) * std::log1p(-p);
  CHECK(log_p_ell(n, p, ell) == doctest::Approx(direct).epsilon(1e-10));
  // Normal-approximation sanity: pmf at the mean is about 1/sqrt(2 pi var).
  double var = n * p * (1.0 - p);
  CHECK(log_p_ell(n, p, ell) == doctest::Approx(-0.5 * std::log(2 * M_PI * var)).epsilon(0.01));
}

TEST_CASE("binomial pmf sums to one through the recurrence path") {
  for (double p : {0.001, 0.3, 0.97}) {
    LogSumExp acc;
    for (uint32_t ell = 0; ell <= 300; ++ell) acc.add(log_p_ell(300, p, ell));
    CHECK(acc.value() == doctest::Approx(0.0).epsilon(1e-11));
  }
}

TEST_CASE("degenerate crossover bias reduces the escape sum to the ell = k term") {
  // c = 1 copies the mutation winner, so only ell = k can reach the optimum.
  const uint32_t n = 30, k = 3;
  const double p = 0.05;
  double expected = log_p_ell(n, p, k) +
                    std::log(one_minus_pow1m(std::exp(log_q_m(n, k, k)), 7.0));
  CHECK(escape_log_p_static(n, k, p, 1.0, 7.0, 5.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("escape probability degenerate rates") {
  CHECK(escape_log_p_static(20, 2, 0.0, 0.5, 4, 4) == kNegInf);
  CHECK(escape_log_p_static(20, 2, 0.5, 0.0, 4, 4) == kNegInf);
  // p = 1 with c = 1 can escape only when the full flip is exactly k wide.
  CHECK(escape_log_p_static(4, 4, 1.0, 1.0, 3, 3) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(escape_log_p_static(20, 2, 1.0, 1.0, 3, 3) == kNegInf);
}

TEST_CASE("truncated and untruncated sums agree at n = 10^4") {
  // Reference: the same three-term sum accumulated over every ell without any
  // early exit, in plain log-sum-exp.
  const uint32_t n = 10000, k = 6;
  for (double delta : {-1.0, 0.0, 1.5}) {
    StaticParams sp = static_params_for_delta(n, k, delta);
    double lambda = (double)sp.lambda_m;
    LogSumExp acc;
    for (uint32_t ell = k; ell <= n; ++ell) {
      double lqm = log_q_m(n, k, ell);
      double log_pm;
      if (ell == k || ell >= 2 * k) {
        log_pm = std::log(one_minus_pow1m(std::exp(lqm), lambda));
      } else {
        log_pm = lambda * lqm;
      }
      double log_qc = k * std::log(sp.c) + (double)(ell - k) * std::log1p(-sp.c);
      double log_pc = std::log(one_minus_pow1m(std::exp(log_qc), lambda));
      acc.add(log_p_ell(n, sp.p, ell) + log_pm + log_pc);
    }
    double full = acc.value();
    double truncated = escape_log_p_static(n, k, sp);
    CHECK(std::fabs(truncated - full) < 1e-12 * std::fabs(full));
  }
}

TEST_CASE("delta parameterization preserves p c n = k") {
  for (uint32_t k : {2u, 4u, 16u}) {
    for (double delta : delta_grid(1 << 20, k)) {
      StaticParams sp = static_params_for_delta(1 << 20, k, delta);
      CHECK(sp.p * sp.c * (double)(1 << 20) == doctest::Approx((double)k).epsilon(1e-12));
      CHECK(sp.p <= 1.0);
      CHECK(sp.c <= 1.0);
    }
  }
  CHECK_THROWS_AS(static_params_for_delta(30, 4, 2.0), std::invalid_argument);
}

TEST_CASE("delta grid spans half-integer steps symmetric around zero") {
  auto grid = delta_grid(1 << 20, 4);
  REQUIRE(grid.size() == 37);
  CHECK(grid.front() == -9.0);
  CHECK(grid.back() == 9.0);
  CHECK(grid[18] == 0.0);
  CHECK(delta_grid(1 << 20, 16).size() == 33);
  CHECK(delta_grid(1 << 20, 64).size() == 29);
}

TEST_CASE("published ratio table reproduced at full scale" * doctest::timeout(300)) {
  for (const auto& series : testdata::kRatioSeries) {
    auto points = runtime_ratio_sweep(1 << 20, series.k);
    for (size_t i = 0; i < series.count; ++i) {
      double want = series.points[i].ratio;
      bool found = false;
      for (const auto& pt : points) {
        if (pt.delta == series.points[i].delta) {
          found = true;
          // Reference values carry four significant digits.
          CHECK(pt.ratio == doctest::Approx(want).epsilon(1e-3));
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("ratio curve shape: dip below one just left of zero, growth on the right") {
  for (uint32_t k : {4u, 16u, 64u}) {
    auto points = runtime_ratio_sweep(1 << 20, k);
    double at_m05 = 0, at_m10 = 0;
    double prev = 0;
    bool monotone_right = true;
    for (const auto& pt : points) {
      if (pt.delta == -0.5) at_m05 = pt.ratio;
      if (pt.delta == -1.0) at_m10 = pt.ratio;
      if (pt.delta >= 0.5) {
        if (prev > 0 && pt.ratio <= prev) monotone_right = false;
        prev = pt.ratio;
      }
    }
    CHECK(at_m05 < 1.0);
    CHECK(at_m10 < 1.0);
    CHECK(monotone_right);
  }
}

TEST_CASE("heavy-tailed exact collapses to the static value at degenerate limits") {
  JumpParams params(40, 3);
  HyperParams hp{2.0, 1, 2.0, 1};
  auto ht = escape_heavy_tailed(params, hp);
  double rate = std::sqrt(1.0 / 40.0);
  CHECK(ht.log_p == doctest::Approx(escape_log_p_static(40, 3, rate, rate, 1, 1)).epsilon(1e-10));
  CHECK(ht.expected_lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ht.expected_evals == doctest::Approx(2.0 * std::exp(-ht.log_p)).epsilon(1e-9));
}

TEST_CASE("search radius window probability tracks k^(1-beta) for beta > 1") {
  // Pr[s in [k..2k]] with a generous upper limit, checked against the
  // power-law tail exponent over k = 2..32.
  const double beta = 1.5;
  PowerLaw law(beta, 4096);
  for (uint32_t k = 2; k <= 32; k *= 2) {
    double ps = law.interval_mass(k, 2 * k);
    double ratio = ps / std::pow((double)k, 1.0 - beta);
    CHECK(ratio > 0.15);
    CHECK(ratio < 0.45);
  }
  // beta = 1: window mass is Theta(1 / log(u)).
  PowerLaw law1(1.0, 4096);
  for (uint32_t k = 2; k <= 32; k *= 2) {
    double ratio = law1.interval_mass(k, 2 * k) * std::log(4096.0);
    CHECK(ratio > 0.5);
    CHECK(ratio < 1.2);
  }
}

TEST_CASE("heavy-tailed exact truncation guard") {
  JumpParams params(50, 2);
  HyperParams hp{1.5, 50, 2.1, ~0ULL >> 1};
  CHECK_THROWS_AS(escape_heavy_tailed(params, hp), TruncationError);
}

TEST_CASE("exact csv schema") {
  std::ostringstream os;
  write_exact_csv_header(os);
  ExactPoint pt{};
  pt.n = 12;
  pt.k = 2;
  pt.delta = 0.5;
  pt.p = 0.1;
  pt.c = 0.2;
  pt.lambda = 6;
  pt.log_p_escape = -1.5;
  pt.expected_evals = 100.0;
  pt.ratio = 1.25;
  write_exact_csv_row(os, pt);
  // 17 significant digits; 0.1 and 0.2 print their exact binary values.
  CHECK(os.str() ==
        "n,k,delta,p,c,lambda,log_P,expected_evals,ratio\n"
        "12,2,0.5,0.10000000000000001,0.20000000000000001,6,-1.5,100,1.25\n");
}

TEST_SUITE_END();
