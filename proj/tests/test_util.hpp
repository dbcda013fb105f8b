#pragma once

#include <random>
#include <string>
#include <vector>

#include "hpq/bitvector.hpp"
#include "hpq/morton.hpp"

namespace test_util {

inline std::string to_string(const hpq::BitVector& bv) {
  std::string s;
  s.reserve(bv.size());
  for (uint64_t i = 0; i < bv.size(); ++i) s.push_back(bv.bit(i) ? '1' : '0');
  return s;
}

inline hpq::BitBuffer buffer(const std::string& bits) {
  hpq::BitBuffer b;
  for (char c : bits) b.push_back(c == '1');
  return b;
}

// reference interleave: walk the bits one by one
inline uint64_t slow_interleave(hpq::Point p, hpq::GridSpec g) {
  uint64_t v = 0;
  for (uint32_t i = g.lg_u; i-- > 0;) {
    v = (v << 1) | ((p.y >> i) & 1);
    v = (v << 1) | ((p.x >> i) & 1);
  }
  return v;
}

inline std::vector<hpq::Point> random_points(std::mt19937_64& rng, uint64_t n,
                                             hpq::GridSpec g) {
  std::vector<hpq::Point> pts;
  pts.reserve(n);
  for (uint64_t i = 0; i < n; ++i)
    pts.push_back(hpq::Point{static_cast<uint32_t>(rng() % g.side()),
                             static_cast<uint32_t>(rng() % g.side())});
  return pts;
}

}  // namespace test_util
