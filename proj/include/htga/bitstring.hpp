#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "htga/rng.hpp"

namespace htga {

/// Fixed-length bit vector packed into 64-bit words with a cached one-bit
/// count. Value type; moves freely between threads.
class BitString {
 public:
  explicit BitString(uint32_t n) : n_(n), ones_(0), words_((n + 63) / 64, 0) {
    assert(n >= 1);
  }

  static BitString all_ones_string(uint32_t n) {
    BitString x(n);
    for (auto& w : x.words_) w = ~0ULL;
    x.mask_tail();
    x.ones_ = n;
    return x;
  }

  static BitString random(uint32_t n, Rng& rng) {
    BitString x(n);
    for (auto& w : x.words_) w = rng.next();
    x.mask_tail();
    x.ones_ = x.recount();
    return x;
  }

  /// Uniform among strings with exactly `count` one-bits.
  static BitString with_ones(uint32_t n, uint32_t count, Rng& rng);

  uint32_t size() const { return n_; }
  uint32_t ones() const { return ones_; }
  bool all_ones() const { return ones_ == n_; }

  bool test(uint32_t i) const {
    assert(i < n_);
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void flip(uint32_t i) {
    assert(i < n_);
    uint64_t& w = words_[i >> 6];
    uint64_t bit = 1ULL << (i & 63);
    ones_ += (w & bit) ? -1 : 1;
    w ^= bit;
  }

  void flip_all(std::span<const uint32_t> positions) {
    for (uint32_t i : positions) flip(i);
  }

  /// Population count recomputed from the words; equals ones() by invariant.
  uint32_t recount() const {
    uint32_t c = 0;
    for (uint64_t w : words_) c += (uint32_t)std::popcount(w);
    return c;
  }

  uint32_t hamming_distance(const BitString& other) const {
    assert(n_ == other.n_);
    uint32_t d = 0;
    for (size_t i = 0; i < words_.size(); ++i) d += (uint32_t)std::popcount(words_[i] ^ other.words_[i]);
    return d;
  }

  /// Indices of set (value=1) or clear (value=0) bits, appended to `out`.
  void collect_positions(bool value, std::vector<uint32_t>& out) const;

  bool operator==(const BitString&) const = default;

 private:
  void mask_tail() {
    uint32_t rem = n_ & 63;
    if (rem) words_.back() &= (1ULL << rem) - 1;
  }

  uint32_t n_;
  uint32_t ones_;
  std::vector<uint64_t> words_;
};

}  // namespace htga
