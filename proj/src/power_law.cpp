#include "htga/power_law.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "htga/math.hpp"

namespace htga {

namespace {

constexpr uint64_t kDirectLimit = 1000000;

double direct_power_sum(uint64_t a, uint64_t b, double beta) {
  KahanSum sum;
  for (uint64_t i = a; i <= b; ++i) sum.add(std::pow((double)i, -beta));
  return sum.value();
}

// Integral of x^-beta over [m, b], written to avoid cancellation when the
// endpoint powers are nearly equal.
double power_integral(double m, double b, double beta) {
  if (beta == 1.0) return std::log(b / m);
  double e = 1.0 - beta;
  return std::pow(m, e) * (-std::expm1(e * std::log(b / m))) / (beta - 1.0);
}

// Euler-Maclaurin for Sum_{i=m}^{b} i^-beta with corrections through B4.
double euler_maclaurin_sum(uint64_t m_int, uint64_t b_int, double beta) {
  double m = (double)m_int, b = (double)b_int;
  double fm = std::pow(m, -beta), fb = std::pow(b, -beta);
  double d1m = -beta * std::pow(m, -beta - 1.0);
  double d1b = -beta * std::pow(b, -beta - 1.0);
  double c3 = -beta * (beta + 1.0) * (beta + 2.0);
  double d3m = c3 * std::pow(m, -beta - 3.0);
  double d3b = c3 * std::pow(b, -beta - 3.0);
  return power_integral(m, b, beta) + 0.5 * (fm + fb) + (d1b - d1m) / 12.0 -
         (d3b - d3m) / 720.0;
}

}  // namespace

double partial_power_sum(uint64_t a, uint64_t b, double beta) {
  if (a < 1 || b < a) throw std::invalid_argument("partial_power_sum: need 1 <= a <= b");
  if (b - a < kDirectLimit) return direct_power_sum(a, b, beta);
  uint64_t m = a + kDirectLimit;
  return direct_power_sum(a, m - 1, beta) + euler_maclaurin_sum(m, b, beta);
}

double normalization(double beta, uint64_t upper) {
  if (upper < 1) throw std::invalid_argument("normalization: upper must be >= 1");
  return 1.0 / partial_power_sum(1, upper, beta);
}

PowerLaw::PowerLaw(double beta, uint64_t upper, Sampling mode)
    : beta_(beta), upper_(upper) {
  if (upper < 1 || upper > kMaxUpper) throw std::invalid_argument("PowerLaw: upper out of range");
  if (!(beta >= 0.0)) throw std::invalid_argument("PowerLaw: beta must be >= 0");
  norm_ = normalization(beta, upper);

  use_table_ = mode == Sampling::table || (mode == Sampling::automatic && upper <= kTableLimit);
  if (use_table_) {
    if (upper > (1ULL << 26)) throw std::invalid_argument("PowerLaw: table mode upper too large");
    cdf_.resize(upper);
    KahanSum acc;
    for (uint64_t i = 1; i <= upper; ++i) {
      acc.add(pmf(i));
      cdf_[i - 1] = acc.value();
    }
    cdf_.back() = 1.0;
  } else {
    // Ratio of the discrete mass at i to the continuous cell mass is largest
    // at i = 1; that value is the exact envelope constant.
    if (beta == 1.0) {
      envelope_ratio_ = 1.0 / std::log(2.0);
    } else {
      envelope_ratio_ = (beta - 1.0) / (-std::expm1((1.0 - beta) * std::log(2.0)));
    }
    pareto_tail_term_ = std::exp((1.0 - beta_) * std::log((double)upper_ + 1.0));
  }
}

double PowerLaw::pmf(uint64_t i) const {
  if (i < 1 || i > upper_) return 0.0;
  return norm_ * std::pow((double)i, -beta_);
}

double PowerLaw::expectation() const {
  return norm_ * partial_power_sum(1, upper_, beta_ - 1.0);
}

double PowerLaw::interval_mass(uint64_t lo, uint64_t hi) const {
  if (lo < 1) lo = 1;
  if (hi > upper_) hi = upper_;
  if (hi < lo) return 0.0;
  return norm_ * partial_power_sum(lo, hi, beta_);
}

uint64_t PowerLaw::sample(Rng& rng) const {
  if (upper_ == 1) return 1;
  return use_table_ ? sample_table(rng) : sample_rejection(rng);
}

uint64_t PowerLaw::sample_table(Rng& rng) const {
  double u = rng.unit();
  uint64_t lo = 0, hi = cdf_.size() - 1;
  while (lo < hi) {
    uint64_t mid = (lo + hi) / 2;
    if (cdf_[mid] <= u) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo + 1;
}

uint64_t PowerLaw::sample_rejection(Rng& rng) const {
  // Continuous Pareto envelope on [1, upper+1), inverted per draw, followed by
  // acceptance against the exact discrete pmf of floor(X).
  while (true) {
    double v = rng.unit_open();
    double x;
    if (beta_ == 1.0) {
      x = std::exp(v * std::log((double)upper_ + 1.0));
    } else {
      double e = 1.0 - beta_;
      x = std::pow(1.0 + v * (pareto_tail_term_ - 1.0), 1.0 / e);
    }
    if (x >= (double)upper_ + 1.0) continue;  // fp edge
    auto i = (uint64_t)x;
    if (i < 1) i = 1;
    if (i > upper_) i = upper_;
    double cell_ratio;
    if (beta_ == 1.0) {
      cell_ratio = 1.0 / ((double)i * std::log1p(1.0 / (double)i));
    } else if (beta_ == 0.0) {
      cell_ratio = 1.0;
    } else {
      cell_ratio =
          (beta_ - 1.0) / ((double)i * (-std::expm1((1.0 - beta_) * std::log1p(1.0 / (double)i))));
    }
    double accept = cell_ratio / envelope_ratio_;
    assert(accept <= 1.0 + 1e-9);
    if (rng.unit() < accept) return i;
  }
}

}  // namespace htga
