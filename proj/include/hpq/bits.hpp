#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

namespace hpq {

inline uint32_t popcount64(uint64_t w) {
  return static_cast<uint32_t>(std::popcount(w));
}

namespace detail {

inline constexpr auto kRev8 = [] {
  std::array<uint8_t, 256> t{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint8_t r = 0;
    for (uint32_t b = 0; b < 8; ++b)
      if (i & (1u << b)) r = static_cast<uint8_t>(r | (1u << (7 - b)));
    t[i] = r;
  }
  return t;
}();

}  // namespace detail

inline uint64_t reverse_bits64(uint64_t v) {
  uint64_t r = 0;
  for (int i = 0; i < 8; ++i) {
    r = (r << 8) | detail::kRev8[v & 0xff];
    v >>= 8;
  }
  return r;
}

// Reverse the low `len` bits of v; bits above `len` must be zero.
inline uint64_t reverse_low_bits(uint64_t v, uint32_t len) {
  assert(len <= 64);
  assert(len == 64 || (v >> len) == 0);
  return len == 0 ? 0 : reverse_bits64(v) >> (64 - len);
}

// Position (0-based from the LSB) of the k-th set bit of w, 1-based k.
inline uint32_t select_in_word(uint64_t w, uint32_t k) {
  assert(k >= 1 && k <= popcount64(w));
#if defined(__BMI2__)
  return static_cast<uint32_t>(std::countr_zero(_pdep_u64(uint64_t(1) << (k - 1), w)));
#else
  uint32_t pos = 0;
  for (;;) {
    uint32_t c = popcount64(w & 0xff);
    if (k <= c) break;
    k -= c;
    w >>= 8;
    pos += 8;
  }
  for (;;) {
    if (w & 1) {
      if (--k == 0) return pos;
    }
    w >>= 1;
    ++pos;
  }
#endif
}

// Read `count` (<= 64) bits at absolute bit offset `off` from an LSB-first
// packed word array. Unused high bits of the result are zero.
inline uint64_t read_bits(const uint64_t* words, uint64_t off, uint32_t count) {
  assert(count <= 64);
  if (count == 0) return 0;
  uint64_t w = off >> 6;
  uint32_t shift = static_cast<uint32_t>(off & 63);
  uint64_t v = words[w] >> shift;
  if (shift + count > 64) v |= words[w + 1] << (64 - shift);
  if (count < 64) v &= (uint64_t(1) << count) - 1;
  return v;
}

// Growable bit string, LSB-first within words.
class BitBuffer {
 public:
  BitBuffer() = default;

  void push_back(bool bit) {
    if ((size_ & 63) == 0) words_.push_back(0);
    if (bit) words_.back() |= uint64_t(1) << (size_ & 63);
    ++size_;
  }

  // Append `count` bits of `bits`, lowest bit first.
  void append_bits(uint64_t bits, uint32_t count) {
    assert(count <= 64);
    for (uint32_t i = 0; i < count; ++i) push_back((bits >> i) & 1);
  }

  bool get(uint64_t i) const {
    assert(i < size_);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::vector<uint64_t>& words() const { return words_; }

  // Adopt a packed word array; words.size() must be ceil(size/64) and the
  // trailing pad bits must be zero.
  static BitBuffer from_words(std::vector<uint64_t> words, uint64_t size) {
    assert(words.size() == (size + 63) / 64);
    assert(size % 64 == 0 || words.empty() ||
           (words.back() >> (size % 64)) == 0);
    BitBuffer b;
    b.words_ = std::move(words);
    b.size_ = size;
    return b;
  }

 private:
  std::vector<uint64_t> words_;
  uint64_t size_ = 0;
};

}  // namespace hpq
