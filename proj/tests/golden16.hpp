#pragma once

// A 14-point set on a 16x16 grid with a fully worked encoding, checked by
// hand: path strings, branch vectors, per-depth path counts and the
// membership trace of (6,9) are all pinned here and asserted verbatim.

#include <string>
#include <vector>

#include "hpq/builder.hpp"
#include "hpq/hpindex.hpp"
#include "hpq/morton.hpp"

namespace golden16 {

inline constexpr uint32_t kLgU = 4;

// ascending label order
inline std::vector<hpq::Point> points() {
  return {{2, 1}, {3, 1}, {0, 3}, {1, 3}, {4, 1}, {6, 3}, {7, 5},
          {6, 7}, {9, 2}, {8, 5}, {8, 6}, {4, 9}, {6, 8}, {6, 9}};
}

// one encoding string per path, in rank order
inline std::vector<std::string> path_strings() {
  return {"000000110", "10010100", "1100010", "110111", "001001",
          "10010",     "1010",     "1000",    "1110",   "1110",
          "010",       "10",       "1",       "1"};
}

inline std::string enc_string() {
  std::string s;
  for (const std::string& p : path_strings()) s += p;
  return s;
}

// branch vectors for depths 0..7
inline std::vector<std::string> branch_strings() {
  return {"1",      "10",         "101",         "10000",
          "101101", "0100000000", "01000000000", "100000100000"};
}

inline std::vector<uint64_t> paths_starting_at() {
  return {1, 1, 1, 2, 1, 4, 1, 1, 2};
}

inline hpq::BitBuffer buffer(const std::string& bits) {
  hpq::BitBuffer b;
  for (char c : bits) b.push_back(c == '1');
  return b;
}

inline hpq::HPIndex index_from_strings() {
  std::vector<hpq::BitBuffer> branch;
  for (const std::string& s : branch_strings()) branch.push_back(buffer(s));
  return hpq::HPIndex::assemble(hpq::GridSpec::from_levels(kLgU),
                                points().size(), buffer(enc_string()),
                                std::move(branch), paths_starting_at());
}

inline hpq::PointSet point_set() {
  return hpq::PointSet::from_points(hpq::GridSpec::from_levels(kLgU), points());
}

}  // namespace golden16
