#include "hpq/k2.hpp"

#include <algorithm>

#include "hpq/builder.hpp"

namespace hpq {

namespace {

// labels[lo, hi) sit inside the depth-`depth` square with smallest label
// `base`; append the node's four quadrant bits, then descend.
void k2_rec(std::vector<BitBuffer>& bufs, const std::vector<uint64_t>& labels,
            uint64_t lo, uint64_t hi, uint32_t depth, uint64_t base,
            uint32_t lg) {
  uint64_t quarter = uint64_t(1) << (2 * (lg - depth) - 2);
  uint64_t bounds[5];
  bounds[0] = lo;
  for (int q = 0; q < 4; ++q) {
    uint64_t limit = base + static_cast<uint64_t>(q + 1) * quarter;
    bounds[q + 1] = std::lower_bound(labels.begin() + bounds[q],
                                     labels.begin() + hi, limit) -
                    labels.begin();
    bufs[depth].push_back(bounds[q + 1] > bounds[q]);
  }
  if (depth + 1 == lg) return;
  for (int q = 0; q < 4; ++q)
    if (bounds[q + 1] > bounds[q])
      k2_rec(bufs, labels, bounds[q], bounds[q + 1], depth + 1,
             base + q * quarter, lg);
}

}  // namespace

K2Index K2Index::build(const PointSet& ps) {
  const uint32_t lg = ps.grid().lg_u;
  std::vector<BitBuffer> bufs(lg);
  if (lg > 0 && ps.size() > 0) {
    std::vector<uint64_t> labels = ps.labels();
    k2_rec(bufs, labels, 0, labels.size(), 0, 0, lg);
  }
  return assemble(ps.grid(), ps.size(), std::move(bufs));
}

K2Index K2Index::assemble(GridSpec g, uint64_t n, std::vector<BitBuffer> levels) {
  if (n > g.cells()) throw CorruptIndexError("point count exceeds the grid");
  if (levels.size() != g.lg_u) throw CorruptIndexError("wrong level count");
  K2Index idx;
  idx.grid_ = g;
  idx.n_ = n;
  if (g.lg_u == 0) {
    if (n > 1) throw CorruptIndexError("point count exceeds the grid");
    return idx;
  }
  if (n == 0) {
    for (const BitBuffer& b : levels)
      if (b.size() != 0) throw CorruptIndexError("empty index with bits");
    idx.levels_.assign(g.lg_u, BitVector());
    return idx;
  }
  if (levels[0].size() != 4) throw CorruptIndexError("root level must have four bits");
  idx.levels_.reserve(levels.size());
  for (uint32_t l = 0; l < g.lg_u; ++l) {
    bool last = l + 1 == g.lg_u;
    idx.levels_.emplace_back(levels[l],
                             last ? BitVector::Dirs::none : BitVector::Dirs::rank_select);
    if (!last && levels[l + 1].size() != 4 * idx.levels_.back().ones())
      throw CorruptIndexError("level size does not match parent ones");
  }
  if (idx.levels_.back().ones() != n)
    throw CorruptIndexError("cell bits differ from n");
  return idx;
}

template <bool kCount>
uint32_t K2Index::walk(Point p) const {
  if (!in_grid(grid_, p)) throw std::invalid_argument("membership: point out of range");
  if (n_ == 0) return 0;
  const uint32_t lg = grid_.lg_u;
  if (lg == 0) return 1;  // 1x1 grid holding its one cell
  uint64_t label = morton_key(p);
  const uint32_t td = 2 * lg;
  uint64_t pos = (label >> (td - 2)) & 3;
  uint32_t probes = 0;
  for (uint32_t l = 0; l + 1 < lg; ++l) {
    ++probes;
    if (!levels_[l].bit(pos)) return kCount ? probes : 0;
    uint64_t group = levels_[l].rank1(pos);
    uint64_t q = (label >> (td - 2 * (l + 2))) & 3;
    pos = group * 4 + q;
  }
  ++probes;
  bool hit = levels_[lg - 1].bit(pos);
  return kCount ? probes : (hit ? 1 : 0);
}

bool K2Index::contains(Point p) const { return walk<false>(p) != 0; }

uint32_t K2Index::probes(Point p) const { return walk<true>(p); }

std::vector<Point> K2Index::range_report(Rect r) const {
  if (r.x1 > grid_.side() || r.y1 > grid_.side() || r.x0 > r.x1 || r.y0 > r.y1)
    throw std::invalid_argument("range_report: rectangle out of range");
  std::vector<Point> out;
  if (n_ == 0 || r.empty()) return out;
  const uint32_t lg = grid_.lg_u;
  if (lg == 0) {
    out.push_back(Point{0, 0});
    return out;
  }

  struct Frame {
    uint32_t depth;  // quadtree depth of the node, >= 1
    uint64_t pos;    // its bit in levels_[depth-1]
    uint64_t x0, y0;
  };
  std::vector<Frame> stack;
  uint64_t half = grid_.side() / 2;
  for (int q = 3; q >= 0; --q) {
    uint64_t cx = (q & 1) ? half : 0, cy = (q & 2) ? half : 0;
    if (levels_[0].bit(q) && cx < r.x1 && cx + half > r.x0 && cy < r.y1 &&
        cy + half > r.y0)
      stack.push_back({1, static_cast<uint64_t>(q), cx, cy});
  }
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.depth == lg) {
      out.push_back(Point{static_cast<uint32_t>(f.x0), static_cast<uint32_t>(f.y0)});
      continue;
    }
    uint64_t base = levels_[f.depth - 1].rank1(f.pos) * 4;
    uint64_t chalf = uint64_t(1) << (lg - f.depth - 1);
    for (int q = 3; q >= 0; --q) {
      uint64_t cx = f.x0 + ((q & 1) ? chalf : 0);
      uint64_t cy = f.y0 + ((q & 2) ? chalf : 0);
      if (levels_[f.depth].bit(base + q) && cx < r.x1 && cx + chalf > r.x0 &&
          cy < r.y1 && cy + chalf > r.y0)
        stack.push_back({f.depth + 1, base + q, cx, cy});
    }
  }
  return out;
}

SpaceStats K2Index::space_stats() const {
  SpaceStats st;
  st.n = n_;
  st.lg_u = grid_.lg_u;
  uint64_t total = 64 * levels_.size();  // per-level length table
  uint64_t bits = 0;
  for (size_t l = 0; l < levels_.size(); ++l) {
    bits += levels_[l].size();
    total += levels_[l].payload_bits() + levels_[l].directory_bits();
    if (l + 1 == levels_.size())
      st.bits_l = levels_[l].size();
    else
      st.bits_h += levels_[l].size();
  }
  st.nodes = bits + 1;  // every bit is a node, plus the root
  st.total_bits = total;
  if (n_ > 0) st.bpp = static_cast<double>(total) / static_cast<double>(n_);
  return st;
}

template uint32_t K2Index::walk<false>(Point) const;
template uint32_t K2Index::walk<true>(Point) const;

}  // namespace hpq
