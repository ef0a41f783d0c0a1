#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "htga/objective.hpp"
#include "htga/params.hpp"

namespace htga {

/// Raised when a heavy-tailed evaluation cannot reach the requested tail
/// tolerance with a bounded number of summation terms.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// log of q_m(ell) = C(n-k, ell-k) / C(n, ell), the per-offspring probability
/// that one mutation flips all k zero-bits of a local-optimum parent.
/// Returns -inf for ell < k; rejects ell > n.
double log_q_m(uint32_t n, uint32_t k, uint32_t ell);

/// log of the Bin(n, p) probability mass at ell; exact at p = 0 and p = 1.
double log_p_ell(uint32_t n, double p, uint32_t ell);

/// log of the one-iteration escape probability P from the local optimum of
/// Jump_k under fixed parameters. Population sizes are real-valued exponents
/// so that lambda = sqrt(n/k)^k stays usable far beyond 2^63.
double escape_log_p_static(uint32_t n, uint32_t k, double p, double c, double lambda_m,
                           double lambda_c);

inline double escape_log_p_static(uint32_t n, uint32_t k, const StaticParams& sp) {
  return escape_log_p_static(n, k, sp.p, sp.c, (double)sp.lambda_m, (double)sp.lambda_c);
}

struct HeavyTailedExact {
  double log_p;            // log of P_ht, the per-iteration escape probability
  double expected_lambda;  // E[lambda] of the population-size law
  double expected_evals;   // 2 E[lambda] / P_ht
};

/// Exact escape probability and expected runtime of the heavy-tailed GA from
/// the local optimum: P_ht = E_s E_lambda [ P_static(s, lambda) ], summed
/// directly when the upper limits allow it and truncated at `tail_tol`
/// remaining mass otherwise.
HeavyTailedExact escape_heavy_tailed(const JumpParams& params, const HyperParams& hp,
                                     double tail_tol = 1e-12);

/// One row of the disturbed-parameter runtime table.
struct ExactPoint {
  uint32_t n, k;
  double delta;
  double p, c;
  double lambda;          // lambda_m = lambda_c
  double log_p_escape;
  double expected_evals;  // (lambda_m + lambda_c) / P
  double ratio;           // expected_evals / expected_evals at delta = 0
};

/// p = 2^delta sqrt(k/n), c = 2^-delta sqrt(k/n); keeps p*c*n = k.
/// Throws if delta pushes either rate above 1.
StaticParams static_params_for_delta(uint32_t n, uint32_t k, double delta);

/// Half-integer delta grid spanning [-log2 sqrt(n/k), +log2 sqrt(n/k)].
std::vector<double> delta_grid(uint32_t n, uint32_t k);

/// Runtime-ratio table for one k at lambda_m = lambda_c = round(sqrt(n/k)^k),
/// normalized against the delta = 0 row.
std::vector<ExactPoint> runtime_ratio_sweep(uint32_t n, uint32_t k);

/// Fixed CSV schema: one row per point, 17 significant digits.
void write_exact_csv_header(std::ostream& os);
void write_exact_csv_row(std::ostream& os, const ExactPoint& pt);

}  // namespace htga
