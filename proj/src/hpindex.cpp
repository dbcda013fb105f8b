#include "hpq/hpindex.hpp"

#include <algorithm>

namespace hpq {

HPIndex::HPIndex() {
  ps_.assign(1, 0);
  cum_.assign(2, 0);
  enc_start_.assign(2, 0);
}

HPIndex HPIndex::assemble(GridSpec g, uint64_t n, BitBuffer path_enc,
                          std::vector<BitBuffer> branch,
                          std::vector<uint64_t> paths_starting_at) {
  const uint32_t td = g.label_bits();  // leaves sit at this depth
  if (n > g.cells()) throw CorruptIndexError("point count exceeds the grid");
  if (n > (uint64_t(1) << 32)) throw CorruptIndexError("point count out of supported range");
  if (paths_starting_at.size() != td + 1)
    throw CorruptIndexError("start-depth table has the wrong length");
  if (branch.size() != td) throw CorruptIndexError("wrong branch vector count");

  HPIndex idx;
  idx.grid_ = g;
  idx.n_ = n;
  idx.ps_ = std::move(paths_starting_at);
  idx.cum_.assign(td + 2, 0);
  for (uint32_t s = 0; s <= td; ++s) idx.cum_[s + 1] = idx.cum_[s] + idx.ps_[s];
  if (idx.cum_[td + 1] != n) throw CorruptIndexError("path count differs from n");
  if (idx.ps_[0] != (n ? 1 : 0)) throw CorruptIndexError("exactly one path may cover the root");

  idx.enc_start_.assign(td + 2, 0);
  for (uint32_t s = 0; s <= td; ++s)
    idx.enc_start_[s + 1] = idx.enc_start_[s] + idx.ps_[s] * (td + 1 - s);
  if (path_enc.size() != idx.enc_start_[td + 1])
    throw CorruptIndexError("encoding length mismatch");
  if (n > 0 && path_enc.get(0)) throw CorruptIndexError("root bit must be zero");

  idx.enc_ = BitVector(path_enc, BitVector::Dirs::none);
  idx.branch_.reserve(td);
  for (uint32_t d = 0; d < td; ++d) {
    if (branch[d].size() != idx.cum_[d + 1])
      throw CorruptIndexError("branch vector length mismatch");
    idx.branch_.emplace_back(branch[d], BitVector::Dirs::rank_select);
    if (idx.branch_.back().ones() != idx.ps_[d + 1])
      throw CorruptIndexError("branch ones differ from path starts");
  }
  return idx;
}

NodeRef HPIndex::locate(uint64_t pos) const {
  if (pos >= enc_.size()) throw std::out_of_range("HPIndex::locate");
  auto it = std::upper_bound(enc_start_.begin(), enc_start_.end(), pos);
  uint32_t s = static_cast<uint32_t>(it - enc_start_.begin()) - 1;
  uint64_t rel = pos - enc_start_[s];
  uint32_t len = path_len(s);
  return NodeRef{pos, static_cast<uint32_t>(cum_[s] + rel / len),
                 static_cast<uint32_t>(s + rel % len), s};
}

uint32_t HPIndex::start_of(uint64_t path) const {
  auto it = std::upper_bound(cum_.begin(), cum_.end(), path);
  return static_cast<uint32_t>(it - cum_.begin()) - 1;
}

HPIndex::Children HPIndex::children(NodeRef v) const {
  Children c;
  if (v.depth == grid_.label_bits()) return c;  // leaf
  c.count = 1;
  c.on_path = NodeRef{v.pos + 1, v.path, v.depth + 1, v.start_depth};
  c.on_path_is_right = enc_.bit(v.pos + 1);
  const BitVector& bd = branch_[v.depth];
  if (bd.bit(v.path)) {
    uint64_t j = bd.rank1(v.path + 1);  // ordinal among the forks at this depth
    uint32_t s = v.depth + 1;
    uint64_t fork = cum_[s] + (j - 1);
    c.off_path = NodeRef{path_base(fork, s), static_cast<uint32_t>(fork), s, s};
    c.count = 2;
  }
  return c;
}

std::optional<NodeRef> HPIndex::parent(NodeRef v) const {
  if (v.pos == 0) return std::nullopt;  // root
  if (!v.is_top())
    return NodeRef{v.pos - 1, v.path, v.depth - 1, v.start_depth};
  uint32_t s = v.start_depth;
  uint64_t j = v.path - cum_[s] + 1;  // ordinal of this path within its start depth
  uint64_t pr = branch_[s - 1].select1(j);
  uint32_t ss = start_of(pr);
  return NodeRef{path_base(pr, ss) + (s - 1 - ss), static_cast<uint32_t>(pr),
                 s - 1, ss};
}

template <bool kTraced>
bool HPIndex::membership_impl(Point p, QueryTrace* tr) const {
  if (!in_grid(grid_, p)) throw std::invalid_argument("membership: point out of range");
  if (n_ == 0) return false;
  const uint32_t td = grid_.label_bits();
  const uint64_t label[2] = {interleave(p, grid_).seq(), 0};
  const uint64_t* enc = enc_.data();

  bool member = false;
  uint64_t consumed = 0;
  uint64_t path = 0;
  uint64_t from = 1;  // the root's own bit carries no label information
  for (;;) {
    uint64_t m = lcp_bits(enc, from, label, consumed, td - consumed);
    if constexpr (kTraced) tr->lcp_lengths.push_back(static_cast<uint32_t>(m));
    consumed += m;
    if (consumed == td) {
      member = true;
      break;
    }
    uint32_t d = static_cast<uint32_t>(consumed);  // node where the label diverges
    const BitVector& bd = branch_[d];
    if (!bd.bit(path)) break;  // one child only, and it disagrees
    uint64_t j = bd.rank1(path + 1);
    path = cum_[d + 1] + (j - 1);
    // the forked path starts at d+1; its first bit is the label bit at offset d
    from = path_base(path, d + 1);
  }
  if constexpr (kTraced) {
    tr->member = member;
    tr->segments = static_cast<uint32_t>(tr->lcp_lengths.size());
    tr->nodes_visited = 1 + consumed;
  }
  return member;
}

bool HPIndex::contains(Point p) const { return membership_impl<false>(p, nullptr); }

QueryTrace HPIndex::membership(Point p) const {
  QueryTrace tr;
  membership_impl<true>(p, &tr);
  return tr;
}

std::vector<Point> HPIndex::range_report(Rect r) const {
  if (r.x1 > grid_.side() || r.y1 > grid_.side() || r.x0 > r.x1 || r.y0 > r.y1)
    throw std::invalid_argument("range_report: rectangle out of range");
  std::vector<Point> out;
  if (n_ == 0 || r.empty()) return out;

  const uint32_t td = grid_.label_bits();
  const uint32_t lg = grid_.lg_u;
  struct Frame {
    NodeRef ref;
    uint64_t x0, y0;
  };
  std::vector<Frame> stack;
  stack.push_back({root(), 0, 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.ref.depth == td) {
      out.push_back(Point{static_cast<uint32_t>(f.x0), static_cast<uint32_t>(f.y0)});
      continue;
    }
    Children ch = children(f.ref);
    NodeRef kids[2];
    bool have[2] = {false, false};
    int on = ch.on_path_is_right ? 1 : 0;
    kids[on] = ch.on_path;
    have[on] = true;
    if (ch.count == 2) {
      kids[1 - on] = ch.off_path;
      have[1 - on] = true;
    }
    uint32_t d = f.ref.depth;
    // child extents; even depths split y, odd depths split x
    uint64_t w, h, dx[2] = {0, 0}, dy[2] = {0, 0};
    if ((d & 1) == 0) {
      h = uint64_t(1) << (lg - d / 2 - 1);
      w = uint64_t(1) << (lg - d / 2);
      dy[1] = h;
    } else {
      w = uint64_t(1) << (lg - d / 2 - 1);
      h = uint64_t(1) << (lg - (d + 1) / 2);
      dx[1] = w;
    }
    for (int b = 1; b >= 0; --b) {  // push right first, emit left first
      if (!have[b]) continue;
      uint64_t cx = f.x0 + dx[b], cy = f.y0 + dy[b];
      if (cx < r.x1 && cx + w > r.x0 && cy < r.y1 && cy + h > r.y0)
        stack.push_back({kids[b], cx, cy});
    }
  }
  return out;
}

SpaceStats HPIndex::space_stats() const {
  SpaceStats st;
  st.n = n_;
  st.lg_u = grid_.lg_u;
  st.nodes = enc_.size();
  st.bits_h = enc_.size();
  uint64_t total = enc_.payload_bits() + enc_.directory_bits();
  for (const BitVector& bv : branch_) {
    st.bits_l += bv.size();
    total += bv.payload_bits() + bv.directory_bits();
  }
  total += 64 * (ps_.size() + cum_.size() + enc_start_.size());
  st.total_bits = total;
  if (n_ > 0) st.bpp = static_cast<double>(total) / static_cast<double>(n_);
  return st;
}

}  // namespace hpq
