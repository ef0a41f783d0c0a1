#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "htga/engine.hpp"

namespace htga {

struct FieldStats {
  double mean = 0.0, median = 0.0, std_dev = 0.0;
  double min = 0.0, max = 0.0;
};

struct SummaryStats {
  FieldStats evaluations;  // T_f across trials
  FieldStats iterations;   // T_I across trials
  double success_rate = 0.0;
  double mean_evals_ci_lo = 0.0;  // 95% bootstrap CI of mean T_f
  double mean_evals_ci_hi = 0.0;
  // Wald consistency |mean(T_f) - 2 E[lambda] mean(T_I)| / mean(T_f); only
  // meaningful for heavy-tailed runs, negative when not applicable.
  double wald_gap = -1.0;
  bool wald_warning = false;
};

FieldStats field_stats(std::vector<double> values);

/// Summary over per-trial results; pass E[lambda] > 0 to enable the Wald
/// consistency check (flagged as a warning above 5% at >= 10^4 trials).
SummaryStats summarize(std::span<const RunResult> results, double expected_lambda = -1.0,
                       uint64_t bootstrap_seed = 0x5EEDB0057A75ULL);

/// Pearson chi-square statistic of observed counts against expected counts.
double chi_square_statistic(std::span<const double> observed, std::span<const double> expected);

/// Merges adjacent bins until every expected count reaches `min_expected`,
/// then returns the goodness-of-fit p-value.
double chi_square_gof_p_value(std::vector<double> observed, std::vector<double> expected,
                              double min_expected = 5.0);

/// Two-sample chi-square homogeneity p-value over shared bins.
double chi_square_two_sample_p_value(std::vector<double> counts_a, std::vector<double> counts_b,
                                     double min_expected = 5.0);

}  // namespace htga
