#include "hpq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hpq {

uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
  assert(n > 0);
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

NaiveIndex::NaiveIndex(const PointSet& ps)
    : grid_(ps.grid()), points_(ps.points()) {
  keys_.reserve(points_.size() * 2);
  for (const Point& p : points_) keys_.insert(morton_key(p));
}

bool NaiveIndex::contains(Point p) const {
  if (!in_grid(grid_, p)) throw std::invalid_argument("membership: point out of range");
  return keys_.count(morton_key(p)) != 0;
}

std::vector<Point> NaiveIndex::range_report(Rect r) const {
  if (r.x1 > grid_.side() || r.y1 > grid_.side() || r.x0 > r.x1 || r.y0 > r.y1)
    throw std::invalid_argument("range_report: rectangle out of range");
  std::vector<Point> out;
  for (const Point& p : points_)
    if (r.contains(p)) out.push_back(p);
  return out;
}

MortonRangeCounter::MortonRangeCounter(const PointSet& ps)
    : grid_(ps.grid()), labels_(ps.labels()) {}

uint64_t MortonRangeCounter::count(Rect r) const {
  if (r.empty() || labels_.empty()) return 0;
  return rec(0, labels_.size(), 0, 0, 0, 0, r);
}

uint64_t MortonRangeCounter::rec(uint64_t lo, uint64_t hi, uint32_t depth,
                                 uint64_t base, uint64_t x0, uint64_t y0,
                                 const Rect& r) const {
  if (lo == hi) return 0;
  uint64_t side = uint64_t(1) << (grid_.lg_u - depth);
  if (x0 >= r.x1 || x0 + side <= r.x0 || y0 >= r.y1 || y0 + side <= r.y0)
    return 0;
  if (x0 >= r.x0 && x0 + side <= r.x1 && y0 >= r.y0 && y0 + side <= r.y1)
    return hi - lo;
  assert(depth < grid_.lg_u);  // a cell either misses r or lies inside it
  uint64_t quarter = uint64_t(1) << (2 * (grid_.lg_u - depth) - 2);
  uint64_t half = side / 2;
  uint64_t total = 0;
  uint64_t b = lo;
  for (int q = 0; q < 4; ++q) {
    uint64_t limit = base + static_cast<uint64_t>(q + 1) * quarter;
    uint64_t e = std::lower_bound(labels_.begin() + b, labels_.begin() + hi,
                                  limit) -
                 labels_.begin();
    total += rec(b, e, depth + 1, base + q * quarter,
                 x0 + ((q & 1) ? half : 0), y0 + ((q & 2) ? half : 0), r);
    b = e;
  }
  return total;
}

uint64_t ClusterSpec::total() const {
  uint64_t t = 0;
  for (const Cluster& c : clusters) t += c.count;
  return t;
}

namespace {

// Draw `count` distinct labels inside the square [x0, x0+side) x [y0,
// y0+side) that are absent from `used`, appending to pts. Rejection first;
// exact enumeration of the free cells when the square is small and dense.
void draw_square(std::mt19937_64& rng, std::unordered_set<uint64_t>& used,
                 std::vector<Point>& pts, uint64_t x0, uint64_t y0,
                 uint64_t side, uint64_t count) {
  if (count == 0) return;
  if (count > side * side)
    throw std::invalid_argument("generator: more points than cells in a square");
  uint64_t got = 0;
  uint64_t cap = 30 * count + 3000;
  for (uint64_t tries = 0; got < count && tries < cap; ++tries) {
    Point p{static_cast<uint32_t>(x0 + bounded(rng, side)),
            static_cast<uint32_t>(y0 + bounded(rng, side))};
    if (used.insert(morton_key(p)).second) {
      pts.push_back(p);
      ++got;
    }
  }
  if (got == count) return;
  if (side * side > (uint64_t(1) << 24))
    throw std::invalid_argument("generator: square too dense to sample");
  std::vector<Point> free;
  for (uint64_t y = y0; y < y0 + side; ++y)
    for (uint64_t x = x0; x < x0 + side; ++x) {
      Point p{static_cast<uint32_t>(x), static_cast<uint32_t>(y)};
      if (!used.count(morton_key(p))) free.push_back(p);
    }
  uint64_t need = count - got;
  if (free.size() < need)
    throw std::invalid_argument("generator: square has too few free cells");
  for (uint64_t i = 0; i < need; ++i) {
    uint64_t j = i + bounded(rng, free.size() - i);
    std::swap(free[i], free[j]);
    used.insert(morton_key(free[i]));
    pts.push_back(free[i]);
  }
}

}  // namespace

PointSet gen_uniform(uint64_t n, GridSpec g, uint64_t seed) {
  if (n > g.cells()) throw std::invalid_argument("gen_uniform: more points than cells");
  std::mt19937_64 rng(seed);
  std::unordered_set<uint64_t> used;
  used.reserve(n * 2);
  std::vector<Point> pts;
  pts.reserve(n);
  draw_square(rng, used, pts, 0, 0, g.side(), n);
  return PointSet::from_points(g, std::move(pts));
}

ClusterSpec make_cluster_spec(uint64_t n, uint32_t c, uint64_t diameter,
                              GridSpec g, uint64_t seed) {
  if (c == 0) throw std::invalid_argument("make_cluster_spec: no clusters");
  if (diameter == 0 || diameter > g.side())
    throw std::invalid_argument("make_cluster_spec: diameter out of range");
  if (n / c + (n % c ? 1 : 0) > diameter * diameter)
    throw std::invalid_argument("make_cluster_spec: clusters would overflow");
  std::mt19937_64 rng(seed);
  ClusterSpec spec;
  spec.clusters.reserve(c);
  uint64_t span = g.side() - diameter + 1;
  for (uint32_t i = 0; i < c; ++i) {
    ClusterSpec::Cluster cl;
    cl.count = n / c + (i < n % c ? 1 : 0);
    cl.diameter = diameter;
    uint64_t cx = bounded(rng, span), cy = bounded(rng, span);
    cl.center = Point{static_cast<uint32_t>(cx + diameter / 2),
                      static_cast<uint32_t>(cy + diameter / 2)};
    spec.clusters.push_back(cl);
  }
  return spec;
}

PointSet gen_clustered(const ClusterSpec& spec, GridSpec g, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::unordered_set<uint64_t> used;
  used.reserve(spec.total() * 2);
  std::vector<Point> pts;
  pts.reserve(spec.total());
  for (const ClusterSpec::Cluster& cl : spec.clusters) {
    if (cl.diameter == 0 || cl.diameter > g.side())
      throw std::invalid_argument("gen_clustered: diameter out of range");
    if (cl.count > cl.diameter * cl.diameter)
      throw std::invalid_argument("gen_clustered: cluster denser than its square");
    uint64_t half = cl.diameter / 2;
    uint64_t x0 = cl.center.x >= half ? cl.center.x - half : 0;
    uint64_t y0 = cl.center.y >= half ? cl.center.y - half : 0;
    x0 = std::min(x0, g.side() - cl.diameter);
    y0 = std::min(y0, g.side() - cl.diameter);
    draw_square(rng, used, pts, x0, y0, cl.diameter, cl.count);
  }
  return PointSet::from_points(g, std::move(pts));
}

AncestorBoundReport check_ancestor_bound(const QTree& qt, const PointSet& ps,
                                         Rect square) {
  uint64_t side = square.x1 - square.x0;
  if (square.x1 <= square.x0 || square.y1 <= square.y0 ||
      side != square.y1 - square.y0)
    throw std::invalid_argument("check_ancestor_bound: not a square");
  if (side < 2 || (side & (side - 1)) != 0)
    throw std::invalid_argument("check_ancestor_bound: side must be a power of two >= 2");
  if (square.x1 > ps.grid().side() || square.y1 > ps.grid().side())
    throw std::invalid_argument("check_ancestor_bound: square outside the grid");

  AncestorBoundReport rep;
  rep.square = square;
  std::unordered_set<int32_t> seen;
  const uint32_t lg = ps.grid().lg_u;
  for (const Point& p : ps.points()) {
    if (!square.contains(p)) continue;
    ++rep.c_size;
    uint64_t label = morton_key(p);
    int32_t v = 0;
    seen.insert(v);
    for (uint32_t d = 0; d < lg; ++d) {
      uint32_t q = static_cast<uint32_t>((label >> (2 * (lg - d - 1))) & 3);
      v = qt.nodes[v].child[q];
      seen.insert(v);
    }
  }
  rep.a_size = seen.size();
  rep.bound = static_cast<double>(rep.c_size) * std::log2(static_cast<double>(side)) +
              4.0 * static_cast<double>(lg);
  rep.holds = rep.c_size == 0 || static_cast<double>(rep.a_size) < rep.bound;
  return rep;
}

AncestorBoundReport check_ancestor_bound(const PointSet& ps, Rect square) {
  QTree qt = build_quadtree(ps);
  return check_ancestor_bound(qt, ps, square);
}

namespace {

Rect chebyshev_square(GridSpec g, Point p, uint64_t dist) {
  Rect r;
  r.x0 = p.x >= dist ? p.x - dist : 0;
  r.y0 = p.y >= dist ? p.y - dist : 0;
  r.x1 = std::min<uint64_t>(g.side(), static_cast<uint64_t>(p.x) + dist + 1);
  r.y1 = std::min<uint64_t>(g.side(), static_cast<uint64_t>(p.y) + dist + 1);
  return r;
}

uint64_t chebyshev(Point a, Point b) {
  uint64_t dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  uint64_t dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return std::max(dx, dy);
}

}  // namespace

uint64_t neighborhood_count(const PointSet& ps, Point p, uint64_t g) {
  if (!in_grid(ps.grid(), p))
    throw std::invalid_argument("neighborhood_count: point out of range");
  MortonRangeCounter counter(ps);
  return counter.count(chebyshev_square(ps.grid(), p, g));
}

std::vector<Point> isolation_rank(const PointSet& ps, size_t top_m) {
  const std::vector<Point>& pts = ps.points();
  const size_t n = pts.size();
  if (n <= 1) {
    std::vector<Point> out = pts;
    if (out.size() > top_m) out.resize(top_m);
    return out;
  }
  MortonRangeCounter counter(ps);
  std::vector<uint64_t> nn(n);
  for (size_t i = 0; i < n; ++i) {
    // any label-order neighbour bounds the nearest distance from above
    uint64_t ub = UINT64_MAX;
    size_t from = i >= 8 ? i - 8 : 0;
    size_t to = std::min(n, i + 9);
    for (size_t j = from; j < to; ++j)
      if (j != i) ub = std::min(ub, chebyshev(pts[i], pts[j]));
    if (ub <= 1) {
      nn[i] = ub;
      continue;
    }
    uint64_t lo = 1, hi = ub;  // smallest d with a second point in reach
    while (lo < hi) {
      uint64_t mid = lo + (hi - lo) / 2;
      if (counter.count(chebyshev_square(ps.grid(), pts[i], mid)) >= 2)
        hi = mid;
      else
        lo = mid + 1;
    }
    nn[i] = lo;
  }
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&nn](size_t a, size_t b) { return nn[a] > nn[b]; });
  std::vector<Point> out;
  out.reserve(std::min(top_m, n));
  for (size_t i = 0; i < n && out.size() < top_m; ++i) out.push_back(pts[idx[i]]);
  return out;
}

}  // namespace hpq
