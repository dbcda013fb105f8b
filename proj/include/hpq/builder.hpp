#pragma once

#include <cstdint>
#include <vector>

#include "hpq/hpindex.hpp"
#include "hpq/morton.hpp"

namespace hpq {

// Deduplicated point set held in ascending label order.
class PointSet {
 public:
  PointSet() = default;

  // Validates coordinates, sorts by label, drops duplicates.
  static PointSet from_points(GridSpec g, std::vector<Point> pts);

  const GridSpec& grid() const { return grid_; }
  const std::vector<Point>& points() const { return points_; }
  uint64_t size() const { return points_.size(); }

  // Packed labels, ascending.
  std::vector<uint64_t> labels() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  GridSpec grid_{};
  std::vector<Point> points_;
};

// Pointer quadtree; every internal node keeps all four quadrants, empty ones
// as value-0 leaves. Fully filled squares are still subdivided to unit
// cells, so cells are the only value-carrying leaves.
struct QTree {
  struct Node {
    int32_t child[4] = {-1, -1, -1, -1};  // TL, TR, BL, BR
    uint8_t value = 0;
    uint8_t depth = 0;
    bool is_leaf() const { return child[0] < 0; }
  };
  GridSpec grid{};
  std::vector<Node> nodes;  // nodes[0] is the root
  uint64_t node_count() const { return nodes.size(); }
};

QTree build_quadtree(const PointSet& ps);

// Binary trie of the labels: each quadtree split becomes two half-steps
// (y bit, then x bit) and subtrees without points are dropped. Leaves all
// sit at depth 2*lg_u and match the points 1:1.
struct BinTree {
  struct Node {
    int32_t left = -1, right = -1;
    uint32_t leaf_count = 0;
    uint8_t depth = 0;
    uint8_t side = 0;  // 1 when the node is a right child; the root is 0
  };
  GridSpec grid{};
  std::vector<Node> nodes;      // empty for the empty set; nodes[0] is the root
  std::vector<int32_t> leaves;  // leaf ids in label order
  uint64_t node_count() const { return nodes.size(); }
  uint64_t n() const { return leaves.size(); }
};

BinTree binarize(const QTree& qt);

// Heavy-path decomposition: each path continues into the child with more
// leaves below it, ties to the left, and ends at a leaf.
struct HeavyPaths {
  std::vector<int32_t> heavy_child;   // per node, -1 at leaves
  std::vector<uint32_t> path_of;      // node -> path id
  std::vector<int32_t> top;           // path id -> topmost node
  std::vector<uint32_t> start_depth;  // path id -> depth of the top
  bool ranked = false;                // whether ids are final ranks
  std::vector<uint64_t> paths_starting_at;  // per depth, filled by order_paths

  size_t path_count() const { return top.size(); }
  std::vector<int32_t> path_nodes(const BinTree& t, size_t path) const;
};

HeavyPaths decompose(const BinTree& t);

// Rank the paths by decreasing length; equal lengths keep the rank order of
// the paths their tops fork from. Realized by one top-down depth scan that
// appends the forked path of every two-child node met in rank order.
void order_paths(const BinTree& t, HeavyPaths& hp);

// Emit the encoded index. pos_to_node, when given, receives the tree node
// behind every encoding position.
HPIndex encode(const BinTree& t, const HeavyPaths& hp,
               std::vector<int32_t>* pos_to_node = nullptr);

// Walk an index back into its point set.
PointSet decode(const HPIndex& idx);

HPIndex build_hp_index(const PointSet& ps);

}  // namespace hpq
