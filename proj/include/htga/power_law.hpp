#pragma once

#include <cstdint>
#include <vector>

#include "htga/rng.hpp"

namespace htga {

/// Sum_{i=a}^{b} i^{-beta}. Direct Kahan summation below one million terms,
/// otherwise direct head plus an Euler-Maclaurin tail; relative error <= 1e-9
/// over the full supported range (b up to 2^63 - 1).
double partial_power_sum(uint64_t a, uint64_t b, double beta);

/// 1 / Sum_{j=1}^{upper} j^{-beta}.
double normalization(double beta, uint64_t upper);

/// Truncated discrete power law pow(beta, upper) on [1..upper].
///
/// Immutable after construction; a shared instance may be sampled from many
/// threads as long as each thread owns its Rng.
class PowerLaw {
 public:
  enum class Sampling { automatic, table, rejection };

  static constexpr uint64_t kTableLimit = 1ULL << 20;
  static constexpr uint64_t kMaxUpper = ~0ULL >> 1;  // 2^63 - 1

  PowerLaw(double beta, uint64_t upper, Sampling mode = Sampling::automatic);

  double beta() const { return beta_; }
  uint64_t upper() const { return upper_; }
  double norm() const { return norm_; }

  /// Pr[X = i]; zero outside [1..upper].
  double pmf(uint64_t i) const;

  /// E[X], via partial_power_sum(1, upper, beta - 1).
  double expectation() const;

  /// Pr[X in [lo..hi]] clipped to the support.
  double interval_mass(uint64_t lo, uint64_t hi) const;

  uint64_t sample(Rng& rng) const;

 private:
  uint64_t sample_table(Rng& rng) const;
  uint64_t sample_rejection(Rng& rng) const;

  double beta_;
  uint64_t upper_;
  double norm_;
  bool use_table_;
  std::vector<double> cdf_;   // inverse-CDF table, only in table mode
  double envelope_ratio_;     // sup_i pmf-to-cell ratio, only in rejection mode
  double pareto_tail_term_;   // (upper+1)^(1-beta), cached for inversion
};

}  // namespace htga
