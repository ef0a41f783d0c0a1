#include "htga/bitstring.hpp"

namespace htga {

BitString BitString::with_ones(uint32_t n, uint32_t count, Rng& rng) {
  assert(count <= n);
  std::vector<uint32_t> positions;
  if (count <= n / 2) {
    BitString x(n);
    sample_distinct(n, count, rng, positions);
    x.flip_all(positions);
    return x;
  }
  BitString x = all_ones_string(n);
  sample_distinct(n, n - count, rng, positions);
  x.flip_all(positions);
  return x;
}

void BitString::collect_positions(bool value, std::vector<uint32_t>& out) const {
  out.clear();
  for (size_t wi = 0; wi < words_.size(); ++wi) {
    uint64_t w = value ? words_[wi] : ~words_[wi];
    if (wi + 1 == words_.size()) {
      uint32_t rem = n_ & 63;
      if (rem && !value) w &= (1ULL << rem) - 1;
    }
    while (w) {
      out.push_back((uint32_t)(wi * 64 + std::countr_zero(w)));
      w &= w - 1;
    }
  }
}

}  // namespace htga
