#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "hpq/bits.hpp"

namespace hpq {

// Square grid of u x u cells, u = 2^lg_u. lg_u <= 31 keeps a full
// root-to-leaf label (2*lg_u bits) inside one machine word.
struct GridSpec {
  uint32_t lg_u = 0;

  static constexpr uint32_t kMaxLgU = 31;

  static GridSpec from_levels(uint32_t lg_u) {
    if (lg_u > kMaxLgU) throw std::invalid_argument("GridSpec: lg_u out of range");
    return GridSpec{lg_u};
  }

  uint64_t side() const { return uint64_t(1) << lg_u; }
  uint64_t cells() const { return uint64_t(1) << (2 * lg_u); }
  uint32_t label_bits() const { return 2 * lg_u; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Cell coordinates: x grows rightward, y downward, origin at the top left.
struct Point {
  uint32_t x = 0;
  uint32_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline bool in_grid(GridSpec g, Point p) {
  return p.x < g.side() && p.y < g.side();
}

// Insert a zero bit above every bit of the low 32 bits of v.
inline uint64_t spread_bits(uint64_t v) {
  v &= 0xffffffffull;
  v = (v | (v << 16)) & 0x0000ffff0000ffffull;
  v = (v | (v << 8)) & 0x00ff00ff00ff00ffull;
  v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0full;
  v = (v | (v << 2)) & 0x3333333333333333ull;
  v = (v | (v << 1)) & 0x5555555555555555ull;
  return v;
}

// Inverse of spread_bits: gather the even-position bits of v.
inline uint64_t compact_bits(uint64_t v) {
  v &= 0x5555555555555555ull;
  v = (v | (v >> 1)) & 0x3333333333333333ull;
  v = (v | (v >> 2)) & 0x0f0f0f0f0f0f0f0full;
  v = (v | (v >> 4)) & 0x00ff00ff00ff00ffull;
  v = (v | (v >> 8)) & 0x0000ffff0000ffffull;
  v = (v | (v >> 16)) & 0x00000000ffffffffull;
  return v;
}

// Z-order key: x and y bits interleaved, y on top. Totally orders cells and
// does not depend on the grid size.
inline uint64_t morton_key(Point p) {
  return (spread_bits(p.y) << 1) | spread_bits(p.x);
}

// Root-to-leaf edge labels, one bit per half-step of a quadtree descent.
// Offset 0 is the depth-1 edge and sits at the top of the packed numeral;
// even offsets carry y bits, odd offsets x bits, both most significant first.
struct PathLabel {
  uint64_t bits = 0;
  uint32_t len = 0;

  uint32_t bit(uint32_t k) const {
    assert(k < len);
    return static_cast<uint32_t>((bits >> (len - 1 - k)) & 1);
  }

  uint64_t value() const { return bits; }

  // Same bits with offset k at word position k, for prefix scans.
  uint64_t seq() const { return reverse_low_bits(bits, len); }

  friend bool operator==(const PathLabel&, const PathLabel&) = default;
};

inline PathLabel interleave(Point p, GridSpec g) {
  if (!in_grid(g, p)) throw std::invalid_argument("interleave: coordinate out of range");
  uint64_t key = morton_key(p);
  assert(g.label_bits() == 64 || (key >> g.label_bits()) == 0);
  return PathLabel{key, g.label_bits()};
}

inline Point deinterleave(PathLabel l, GridSpec g) {
  if (l.len != g.label_bits()) throw std::invalid_argument("deinterleave: label length mismatch");
  return Point{static_cast<uint32_t>(compact_bits(l.bits)),
               static_cast<uint32_t>(compact_bits(l.bits >> 1))};
}

// Longest common prefix (in bits) of two windows of LSB-first packed arrays.
inline uint64_t lcp_bits(const uint64_t* a, uint64_t a_off, const uint64_t* b,
                         uint64_t b_off, uint64_t max_bits) {
  uint64_t matched = 0;
  while (matched < max_bits) {
    uint32_t chunk = static_cast<uint32_t>(std::min<uint64_t>(64, max_bits - matched));
    uint64_t wa = read_bits(a, a_off + matched, chunk);
    uint64_t wb = read_bits(b, b_off + matched, chunk);
    uint64_t diff = wa ^ wb;
    if (diff != 0) return matched + std::countr_zero(diff);
    matched += chunk;
  }
  return max_bits;
}

}  // namespace hpq
