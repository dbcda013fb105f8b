#pragma once

#include <cstdint>
#include <vector>

#include "hpq/bitvector.hpp"
#include "hpq/hpindex.hpp"
#include "hpq/morton.hpp"

namespace hpq {

class PointSet;

// Level-wise quadtree bitmap (k = 2): levels_[l] holds four bits per
// surviving depth-l node, quadrants in label order, nodes in the order of
// their parents' bits. Children of the node behind bit p of level l start
// at 4 * rank1(levels_[l], p) in level l+1.
class K2Index {
 public:
  K2Index() = default;

  static K2Index build(const PointSet& ps);

  // Validates level sizes against each other and n; throws
  // CorruptIndexError on any mismatch.
  static K2Index assemble(GridSpec g, uint64_t n, std::vector<BitBuffer> levels);

  const GridSpec& grid() const { return grid_; }
  uint64_t n() const { return n_; }
  bool empty() const { return n_ == 0; }
  uint32_t level_count() const { return static_cast<uint32_t>(levels_.size()); }
  const BitVector& level(uint32_t l) const { return levels_.at(l); }

  bool contains(Point p) const;
  // Level bits inspected by a membership walk.
  uint32_t probes(Point p) const;

  std::vector<Point> range_report(Rect r) const;

  SpaceStats space_stats() const;

 private:
  template <bool kCount>
  uint32_t walk(Point p) const;

  GridSpec grid_{};
  uint64_t n_ = 0;
  std::vector<BitVector> levels_;  // lg_u entries; the last one is the cell level
};

}  // namespace hpq
