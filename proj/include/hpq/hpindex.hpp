#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hpq/bitvector.hpp"
#include "hpq/morton.hpp"

namespace hpq {

struct CorruptIndexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Half-open cell rectangle [x0, x1) x [y0, y1).
struct Rect {
  uint64_t x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  bool contains(Point p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
  bool empty() const { return x0 >= x1 || y0 >= y1; }

  static Rect whole(GridSpec g) { return Rect{0, g.side(), 0, g.side()}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct SpaceStats {
  uint64_t n = 0;
  uint32_t lg_u = 0;
  uint64_t nodes = 0;       // nodes of the encoded tree
  uint64_t bits_h = 0;      // path-encoding payload
  uint64_t bits_l = 0;      // branch-vector payload
  uint64_t total_bits = 0;  // payloads, directories and count tables
  std::optional<double> bpp;
};

// A tree node addressed by its bit position in the concatenated path
// encodings, together with the decoded (path rank, depth) view.
struct NodeRef {
  uint64_t pos = 0;
  uint32_t path = 0;
  uint32_t depth = 0;
  uint32_t start_depth = 0;  // depth of the path's top node

  uint32_t offset() const { return depth - start_depth; }
  bool is_top() const { return depth == start_depth; }

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct QueryTrace {
  bool member = false;
  uint32_t segments = 0;              // path prefixes walked
  std::vector<uint32_t> lcp_lengths;  // bits matched per segment
  uint64_t nodes_visited = 0;
};

// Succinct quadtree over the binarized trie of cell labels, encoded by
// heavy-path decomposition.
//
// Every node is one bit (0 = the node is a left child; the root counts as
// left). Paths are concatenated in rank order: ranks sort by start depth,
// and within one start depth by the rank of the parent path. Paths of equal
// length are therefore contiguous, which makes (path, depth) <-> bit
// position plain arithmetic over per-start-depth counts. branch_[d] marks,
// for the paths covering depth d in rank order, whether their depth-d node
// has two children; the j-th one of branch_[d] belongs to the parent of the
// j-th path starting at depth d+1.
class HPIndex {
 public:
  HPIndex();  // empty set on a 1x1 grid

  // Validates the components and wires the directories; throws
  // CorruptIndexError if the pieces are inconsistent.
  static HPIndex assemble(GridSpec g, uint64_t n, BitBuffer path_enc,
                          std::vector<BitBuffer> branch,
                          std::vector<uint64_t> paths_starting_at);

  const GridSpec& grid() const { return grid_; }
  uint64_t n() const { return n_; }
  bool empty() const { return n_ == 0; }
  uint64_t tree_nodes() const { return enc_.size(); }
  uint64_t path_count() const { return n_; }

  NodeRef root() const {
    if (n_ == 0) throw std::out_of_range("HPIndex::root: empty index");
    return NodeRef{0, 0, 0, 0};
  }

  // Node holding the given encoding position.
  NodeRef locate(uint64_t pos) const;

  struct Children {
    uint8_t count = 0;
    NodeRef on_path;   // next node of the same path, valid if count >= 1
    NodeRef off_path;  // top of the forked path, valid if count == 2
    bool on_path_is_right = false;
  };
  Children children(NodeRef v) const;
  std::optional<NodeRef> parent(NodeRef v) const;

  bool contains(Point p) const;
  QueryTrace membership(Point p) const;

  // All points inside r, in ascending label order.
  std::vector<Point> range_report(Rect r) const;

  SpaceStats space_stats() const;

  // raw views (serialization, tests)
  const BitVector& path_enc() const { return enc_; }
  const BitVector& branch(uint32_t d) const { return branch_.at(d); }
  const std::vector<uint64_t>& paths_starting_at() const { return ps_; }
  // number of paths starting at depth < s
  uint64_t paths_before(uint32_t s) const { return cum_.at(s); }
  // first encoding bit of the paths starting at depth s
  uint64_t class_begin(uint32_t s) const { return enc_start_.at(s); }

 private:
  template <bool kTraced>
  bool membership_impl(Point p, QueryTrace* tr) const;

  uint32_t path_len(uint32_t s) const { return 2 * grid_.lg_u + 1 - s; }
  uint64_t path_base(uint64_t path, uint32_t s) const {
    return enc_start_[s] + (path - cum_[s]) * path_len(s);
  }
  uint32_t start_of(uint64_t path) const;

  GridSpec grid_{};
  uint64_t n_ = 0;
  BitVector enc_;                  // one bit per node, no directories
  std::vector<BitVector> branch_;  // 2*lg_u vectors with rank/select
  std::vector<uint64_t> ps_;       // paths per start depth, 2*lg_u + 1 entries
  std::vector<uint64_t> cum_;      // exclusive prefix sums of ps_
  std::vector<uint64_t> enc_start_;  // encoding offset per start-depth class
};

}  // namespace hpq
