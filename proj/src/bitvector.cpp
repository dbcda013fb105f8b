#include "hpq/bitvector.hpp"

#include <algorithm>

namespace hpq {

BitVector::BitVector(const BitBuffer& buf, Dirs dirs) {
  words_ = buf.words();
  len_ = buf.size();
  if (len_ & 63) words_.back() &= (uint64_t(1) << (len_ & 63)) - 1;
  for (uint64_t w : words_) ones_ += popcount64(w);
  dirs_ = dirs == Dirs::rank_select;
  if (!dirs_) return;

  size_t sbs = (len_ + 511) / 512;
  super_abs_.assign(sbs + 1, 0);
  super_rel_.assign(sbs + 1, 0);
  hints_.clear();

  uint64_t total = 0;
  uint64_t next_hint = 1;  // 1-based ordinal of the next hinted one
  for (size_t sb = 0; sb < sbs; ++sb) {
    super_abs_[sb] = total;
    uint64_t in_sb = 0;
    for (uint32_t k = 0; k < 8; ++k) {
      size_t w = sb * 8 + k;
      uint64_t c = w < words_.size() ? popcount64(words_[w]) : 0;
      in_sb += c;
      if (k < 7) super_rel_[sb] |= (in_sb & 0x1ff) << (9 * k);
    }
    while (next_hint <= total + in_sb) {
      hints_.push_back(static_cast<uint32_t>(sb));
      next_hint += 512;
    }
    total += in_sb;
  }
  super_abs_[sbs] = total;
  hints_.push_back(sbs ? static_cast<uint32_t>(sbs - 1) : 0);
}

uint64_t BitVector::select1(uint64_t j) const {
  if (j == 0 || j > ones_) throw std::out_of_range("BitVector::select1");
  assert(dirs_);
  size_t t = (j - 1) >> 9;
  size_t lo = hints_[t];
  size_t hi = hints_[std::min(t + 1, hints_.size() - 1)];
  // first superblock holding at least j ones up to its end
  while (lo < hi) {
    size_t mid = lo + (hi - lo) / 2;
    if (super_abs_[mid + 1] >= j) hi = mid; else lo = mid + 1;
  }
  uint64_t rem = j - super_abs_[lo];
  uint32_t k = 0;
  while (k < 7) {
    uint64_t before_next = (super_rel_[lo] >> (9 * k)) & 0x1ff;
    if (before_next >= rem) break;
    ++k;
  }
  if (k) rem -= (super_rel_[lo] >> (9 * (k - 1))) & 0x1ff;
  size_t w = lo * 8 + k;
  return (static_cast<uint64_t>(w) << 6) +
         select_in_word(words_[w], static_cast<uint32_t>(rem));
}

}  // namespace hpq
