#include "htga/rng.hpp"

#include <cassert>
#include <unordered_set>

namespace htga {

uint32_t sample_binomial(uint32_t n, double p, Rng& rng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
  // Skip runs of failures with geometric jumps; exact for any p in (0, 1/2].
  const double log_q = std::log1p(-p);
  uint64_t pos = 0;
  uint32_t successes = 0;
  while (true) {
    double skip = std::floor(std::log(rng.unit_open()) / log_q);
    if (skip >= (double)n) break;  // guards against overflow before the cast
    pos += (uint64_t)skip;
    if (pos >= n) break;
    ++successes;
    ++pos;
    if (pos >= n) break;
  }
  return successes;
}

void sample_distinct(uint32_t n, uint32_t count, Rng& rng, std::vector<uint32_t>& out) {
  assert(count <= n);
  out.clear();
  if (count == 0) return;
  out.reserve(count);
  std::unordered_set<uint32_t> seen;
  seen.reserve(count * 2);
  for (uint32_t j = n - count; j < n; ++j) {
    auto t = (uint32_t)rng.below(j + 1);
    if (seen.insert(t).second) {
      out.push_back(t);
    } else {
      seen.insert(j);
      out.push_back(j);
    }
  }
}

}  // namespace htga
