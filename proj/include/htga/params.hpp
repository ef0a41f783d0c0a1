#pragma once

#include <cstdint>
#include <stdexcept>

namespace htga {

/// The four hyperparameters of the heavy-tailed GA: the search-radius law
/// pow(beta_s, u_s) and the population-size law pow(beta_lambda, u_lambda).
struct HyperParams {
  double beta_s;
  uint64_t u_s;
  double beta_lambda;
  uint64_t u_lambda;

  void validate() const {
    if (!(beta_s >= 0.0) || !(beta_lambda >= 0.0))
      throw std::invalid_argument("HyperParams: exponents must be >= 0");
    if (u_s < 1 || u_lambda < 1)
      throw std::invalid_argument("HyperParams: upper limits must be >= 1");
  }

  /// Low-risk default: beta_s slightly above one, beta_lambda slightly above
  /// two, generous upper limits.
  static HyperParams recommended(uint32_t n) {
    return {1.1, n, 2.1, (~0ULL >> 1)};
  }
};

/// Fixed parameters of the standard (1+(lambda,lambda)) GA.
struct StaticParams {
  double p;
  double c;
  uint64_t lambda_m;
  uint64_t lambda_c;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0) || !(c >= 0.0 && c <= 1.0))
      throw std::invalid_argument("StaticParams: p and c must lie in [0,1]");
    if (lambda_m < 1 || lambda_c < 1)
      throw std::invalid_argument("StaticParams: population sizes must be >= 1");
  }
};

/// Mutation law of the (1+1) EA baseline: a fixed rate chi/n, or a rate r/n
/// with r drawn fresh each iteration from pow(beta, n/2).
struct MutationSpec {
  enum class Kind { standard_rate, heavy_tailed };
  Kind kind = Kind::standard_rate;
  double chi = 1.0;
  double beta = 1.5;

  static MutationSpec standard(double chi = 1.0) { return {Kind::standard_rate, chi, 0.0}; }
  static MutationSpec heavy(double beta) { return {Kind::heavy_tailed, 0.0, beta}; }
};

}  // namespace htga
