#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hpq/bits.hpp"

namespace hpq {

// Plain immutable bitvector with constant-time access and rank and
// near-constant select.
//
// Rank directory: one absolute 64-bit count per 512-bit superblock plus
// seven 9-bit in-superblock prefixes packed into a second word, 128 bits per
// superblock (25% of the payload). Select keeps the superblock of every
// 512th one and binary-searches between hints. Directories are optional so
// payloads that are only read bit-wise can skip them.
class BitVector {
 public:
  enum class Dirs { none, rank_select };

  BitVector() = default;
  explicit BitVector(const BitBuffer& buf, Dirs dirs = Dirs::rank_select);

  uint64_t size() const { return len_; }
  uint64_t ones() const { return ones_; }
  bool has_dirs() const { return dirs_; }

  // Unchecked bit read; callers guarantee i < size().
  bool bit(uint64_t i) const {
    assert(i < len_);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  bool access(uint64_t i) const {
    if (i >= len_) throw std::out_of_range("BitVector::access");
    return bit(i);
  }

  // Number of ones in [0, i).
  uint64_t rank1(uint64_t i) const {
    if (i > len_) throw std::out_of_range("BitVector::rank1");
    assert(dirs_);
    uint64_t sb = i >> 9;
    uint32_t k = static_cast<uint32_t>((i >> 6) & 7);
    uint64_t r = super_abs_[sb];
    if (k) r += (super_rel_[sb] >> (9 * (k - 1))) & 0x1ff;
    uint32_t rem = static_cast<uint32_t>(i & 63);
    if (rem) r += popcount64(words_[i >> 6] & ((uint64_t(1) << rem) - 1));
    return r;
  }

  // Position of the j-th one, 1-based j.
  uint64_t select1(uint64_t j) const;

  const uint64_t* data() const { return words_.data(); }
  std::span<const uint64_t> words() const { return words_; }

  uint64_t payload_bits() const { return 64 * words_.size(); }
  uint64_t directory_bits() const {
    if (!dirs_) return 0;
    return 64 * (super_abs_.size() + super_rel_.size()) + 32 * hints_.size();
  }

 private:
  std::vector<uint64_t> words_;
  uint64_t len_ = 0;
  uint64_t ones_ = 0;
  bool dirs_ = false;
  std::vector<uint64_t> super_abs_;  // ones before each superblock, sentinel at the end
  std::vector<uint64_t> super_rel_;  // 7 packed 9-bit prefixes per superblock
  std::vector<uint32_t> hints_;      // superblock of every 512th one, sentinel at the end
};

}  // namespace hpq
