#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace htga {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log of the binomial coefficient C(n, k) via lgamma; -inf outside the support.
double log_choose(double n, double k);

/// log(1 - exp(x)) for x <= 0, stable near both ends.
double log1mexp(double x);

/// 1 - (1 - q)^lambda for q in [0,1] and real lambda >= 0, computed without
/// cancellation (q may be denormal-small, lambda may be 2^448).
double one_minus_pow1m(double q, double lambda);

/// Regularized upper incomplete gamma Q(a, x); used for chi-square p-values.
double gamma_q(double a, double x);

/// Upper tail p-value of a chi-square statistic with df degrees of freedom.
double chi_square_p_value(double statistic, double df);

/// Streaming log-sum-exp accumulator: add terms as logs, read the log of the sum.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double log_max() const { return max_; }
  double value() const { return sum_ > 0.0 ? max_ + std::log(sum_) : kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

/// Kahan compensated accumulator for long positive sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace htga
