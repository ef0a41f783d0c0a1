#pragma once

#include <cstdint>
#include <stdexcept>

#include "htga/bitstring.hpp"

namespace htga {

struct JumpParams {
  uint32_t n;
  uint32_t k;

  JumpParams(uint32_t n_, uint32_t k_) : n(n_), k(k_) {
    if (k < 2 || k > n) throw std::invalid_argument("JumpParams: need 2 <= k <= n");
  }

  /// The analyzed regime is k <= n/4; larger k is allowed but flagged.
  bool in_analyzed_regime() const { return 4ULL * k <= n; }
};

inline uint32_t onemax(const BitString& x) { return x.ones(); }

/// Jump_k fitness as a function of the one-bit count (unitation).
inline int64_t jump_from_ones(const JumpParams& params, uint32_t om) {
  if (om > params.n - params.k && om < params.n) return (int64_t)params.n - om;
  return (int64_t)om + params.k;
}

inline int64_t jump(const JumpParams& params, const BitString& x) {
  return jump_from_ones(params, x.ones());
}

inline bool is_local_optimum(const JumpParams& params, const BitString& x) {
  return x.ones() == params.n - params.k;
}

inline BitString random_bitstring(uint32_t n, Rng& rng) { return BitString::random(n, rng); }

inline BitString local_optimum_start(const JumpParams& params, Rng& rng) {
  return BitString::with_ones(params.n, params.n - params.k, rng);
}

/// Unitation objective shared by the optimizers: OneMax for k == 0, Jump_k
/// otherwise. Fitness depends on a search point only through its ones count.
struct Objective {
  uint32_t n;
  uint32_t k;  // 0 selects OneMax

  static Objective one_max(uint32_t n) { return {n, 0}; }
  static Objective jump(const JumpParams& p) { return {p.n, p.k}; }

  int64_t from_ones(uint32_t om) const {
    if (k == 0) return om;
    if (om > n - k && om < n) return (int64_t)n - om;
    return (int64_t)om + k;
  }

  int64_t value(const BitString& x) const { return from_ones(x.ones()); }
  int64_t max_value() const { return (int64_t)n + k; }
};

}  // namespace htga
