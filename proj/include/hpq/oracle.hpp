#pragma once

#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "hpq/builder.hpp"
#include "hpq/morton.hpp"

namespace hpq {

// Uniform draw from [0, n) by rejection; bit-identical across platforms.
uint64_t bounded(std::mt19937_64& rng, uint64_t n);

// Hash-set reference for membership and linear-scan range reporting.
class NaiveIndex {
 public:
  explicit NaiveIndex(const PointSet& ps);

  const GridSpec& grid() const { return grid_; }
  uint64_t n() const { return points_.size(); }

  bool contains(Point p) const;
  std::vector<Point> range_report(Rect r) const;

 private:
  GridSpec grid_{};
  std::vector<Point> points_;  // canonical order
  std::unordered_set<uint64_t> keys_;
};

// Counts points inside rectangles by quadrant descent over the sorted label
// array; built once, queried many times.
class MortonRangeCounter {
 public:
  explicit MortonRangeCounter(const PointSet& ps);
  uint64_t count(Rect r) const;

 private:
  uint64_t rec(uint64_t lo, uint64_t hi, uint32_t depth, uint64_t base,
               uint64_t x0, uint64_t y0, const Rect& r) const;

  GridSpec grid_{};
  std::vector<uint64_t> labels_;
};

struct ClusterSpec {
  struct Cluster {
    uint64_t count = 0;
    uint64_t diameter = 0;  // side of the cluster square, in cells
    Point center;
  };
  std::vector<Cluster> clusters;
  uint64_t total() const;
};

PointSet gen_uniform(uint64_t n, GridSpec g, uint64_t seed);

// Even split of n over c clusters with a common diameter and random centers.
ClusterSpec make_cluster_spec(uint64_t n, uint32_t c, uint64_t diameter,
                              GridSpec g, uint64_t seed);

PointSet gen_clustered(const ClusterSpec& spec, GridSpec g, uint64_t seed);

// Inclusive quadtree ancestors of the points falling into one square.
struct AncestorBoundReport {
  Rect square;
  uint64_t c_size = 0;  // points inside the square
  uint64_t a_size = 0;  // distinct nodes on their root paths, leaves included
  double bound = 0;     // c_size * lg(side) + 4 * lg_u
  bool holds = false;   // a_size < bound, or c_size == 0
};

AncestorBoundReport check_ancestor_bound(const QTree& qt, const PointSet& ps,
                                         Rect square);
AncestorBoundReport check_ancestor_bound(const PointSet& ps, Rect square);

// Filled cells within Chebyshev distance g of p, p itself included.
uint64_t neighborhood_count(const PointSet& ps, Point p, uint64_t g);

// Points ordered by the Chebyshev distance to their nearest other point,
// most isolated first; ties keep ascending label order. Returns the first
// top_m points.
std::vector<Point> isolation_rank(const PointSet& ps, size_t top_m);

}  // namespace hpq
