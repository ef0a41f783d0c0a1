#include "htga/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "htga/math.hpp"
#include "htga/rng.hpp"

namespace htga {

FieldStats field_stats(std::vector<double> values) {
  FieldStats fs;
  if (values.empty()) return fs;
  std::sort(values.begin(), values.end());
  fs.min = values.front();
  fs.max = values.back();
  size_t n = values.size();
  fs.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double sum = 0.0;
  for (double v : values) sum += v;
  fs.mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - fs.mean) * (v - fs.mean);
  fs.std_dev = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
  return fs;
}

SummaryStats summarize(std::span<const RunResult> results, double expected_lambda,
                       uint64_t bootstrap_seed) {
  SummaryStats s;
  if (results.empty()) return s;
  std::vector<double> evals, iters;
  evals.reserve(results.size());
  iters.reserve(results.size());
  size_t successes = 0;
  for (const auto& r : results) {
    evals.push_back((double)r.evaluations);
    iters.push_back((double)r.iterations);
    successes += r.success;
  }
  s.evaluations = field_stats(evals);
  s.iterations = field_stats(iters);
  s.success_rate = (double)successes / results.size();

  constexpr int kResamples = 1000;
  Rng rng(bootstrap_seed);
  std::vector<double> means;
  means.reserve(kResamples);
  for (int b = 0; b < kResamples; ++b) {
    double sum = 0.0;
    for (size_t i = 0; i < evals.size(); ++i) sum += evals[rng.below(evals.size())];
    means.push_back(sum / evals.size());
  }
  std::sort(means.begin(), means.end());
  s.mean_evals_ci_lo = means[(size_t)(0.025 * (kResamples - 1))];
  s.mean_evals_ci_hi = means[(size_t)(0.975 * (kResamples - 1))];

  if (expected_lambda > 0.0 && s.evaluations.mean > 0.0) {
    double predicted = 2.0 * expected_lambda * s.iterations.mean;
    s.wald_gap = std::fabs(s.evaluations.mean - predicted) / s.evaluations.mean;
    s.wald_warning = results.size() >= 10000 && s.wald_gap >= 0.05;
  }
  return s;
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_statistic: size mismatch");
  double stat = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) throw std::invalid_argument("chi_square_statistic: empty bin");
    double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

namespace {

// Greedy right-merge of underpopulated bins, applied to both vectors in step.
void merge_sparse_bins(std::vector<double>& primary, std::vector<double>& secondary,
                       double min_expected) {
  size_t w = 0;
  for (size_t i = 0; i < primary.size(); ++i) {
    if (w > 0 && primary[w - 1] < min_expected) {
      primary[w - 1] += primary[i];
      secondary[w - 1] += secondary[i];
    } else {
      primary[w] = primary[i];
      secondary[w] = secondary[i];
      ++w;
    }
  }
  while (w > 1 && primary[w - 1] < min_expected) {
    primary[w - 2] += primary[w - 1];
    secondary[w - 2] += secondary[w - 1];
    --w;
  }
  primary.resize(w);
  secondary.resize(w);
}

}  // namespace

double chi_square_gof_p_value(std::vector<double> observed, std::vector<double> expected,
                              double min_expected) {
  merge_sparse_bins(expected, observed, min_expected);
  if (expected.size() < 2) return 1.0;
  double stat = chi_square_statistic(observed, expected);
  return chi_square_p_value(stat, (double)expected.size() - 1);
}

double chi_square_two_sample_p_value(std::vector<double> counts_a, std::vector<double> counts_b,
                                     double min_expected) {
  if (counts_a.size() != counts_b.size())
    throw std::invalid_argument("chi_square_two_sample: size mismatch");
  std::vector<double> totals(counts_a.size());
  for (size_t i = 0; i < counts_a.size(); ++i) totals[i] = counts_a[i] + counts_b[i];
  // Merge on combined counts, mirroring the merges onto both samples.
  std::vector<std::pair<double, double>> merged;
  double acc_a = 0.0, acc_b = 0.0, acc_t = 0.0;
  for (size_t i = 0; i < totals.size(); ++i) {
    acc_a += counts_a[i];
    acc_b += counts_b[i];
    acc_t += totals[i];
    if (acc_t >= 2.0 * min_expected) {
      merged.emplace_back(acc_a, acc_b);
      acc_a = acc_b = acc_t = 0.0;
    }
  }
  if (acc_t > 0.0) {
    if (!merged.empty()) {
      merged.back().first += acc_a;
      merged.back().second += acc_b;
    } else {
      merged.emplace_back(acc_a, acc_b);
    }
  }
  if (merged.size() < 2) return 1.0;
  double n_a = 0.0, n_b = 0.0;
  for (auto& [a, b] : merged) {
    n_a += a;
    n_b += b;
  }
  double stat = 0.0;
  for (auto& [a, b] : merged) {
    double t = a + b;
    double ea = t * n_a / (n_a + n_b);
    double eb = t * n_b / (n_a + n_b);
    stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  return chi_square_p_value(stat, (double)merged.size() - 1);
}

}  // namespace htga
