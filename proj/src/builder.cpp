#include "hpq/builder.hpp"

#include <algorithm>
#include <limits>

namespace hpq {

PointSet PointSet::from_points(GridSpec g, std::vector<Point> pts) {
  for (const Point& p : pts)
    if (!in_grid(g, p)) throw std::invalid_argument("PointSet: coordinate out of range");
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return morton_key(a) < morton_key(b);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  PointSet ps;
  ps.grid_ = g;
  ps.points_ = std::move(pts);
  return ps;
}

std::vector<uint64_t> PointSet::labels() const {
  std::vector<uint64_t> out;
  out.reserve(points_.size());
  for (const Point& p : points_) out.push_back(morton_key(p));
  return out;
}

namespace {

int32_t new_qnode(QTree& qt, uint32_t depth) {
  if (qt.nodes.size() > static_cast<size_t>(std::numeric_limits<int32_t>::max()))
    throw std::length_error("quadtree too large");
  qt.nodes.push_back({});
  qt.nodes.back().depth = static_cast<uint8_t>(depth);
  return static_cast<int32_t>(qt.nodes.size() - 1);
}

// labels[lo, hi) fall inside the square at `depth` whose smallest label is
// `base`.
int32_t build_rec(QTree& qt, const std::vector<uint64_t>& labels, uint64_t lo,
                  uint64_t hi, uint32_t depth, uint64_t base) {
  int32_t id = new_qnode(qt, depth);
  if (lo == hi) return id;  // value-0 leaf
  qt.nodes[id].value = 1;
  if (depth == qt.grid.lg_u) {
    assert(hi == lo + 1);
    return id;
  }
  uint64_t quarter = uint64_t(1) << (2 * (qt.grid.lg_u - depth) - 2);
  uint64_t b = lo;
  for (int q = 0; q < 4; ++q) {
    uint64_t limit = base + static_cast<uint64_t>(q + 1) * quarter;
    uint64_t e = std::lower_bound(labels.begin() + b, labels.begin() + hi, limit) -
                 labels.begin();
    int32_t c = build_rec(qt, labels, b, e, depth + 1, base + q * quarter);
    qt.nodes[id].child[q] = c;
    b = e;
  }
  return id;
}

}  // namespace

QTree build_quadtree(const PointSet& ps) {
  QTree qt;
  qt.grid = ps.grid();
  std::vector<uint64_t> labels = ps.labels();
  build_rec(qt, labels, 0, labels.size(), 0, 0);
  return qt;
}

namespace {

int32_t new_tnode(BinTree& t, uint32_t depth, uint8_t side) {
  if (t.nodes.size() > static_cast<size_t>(std::numeric_limits<int32_t>::max()))
    throw std::length_error("tree too large");
  t.nodes.push_back({});
  t.nodes.back().depth = static_cast<uint8_t>(depth);
  t.nodes.back().side = side;
  return static_cast<int32_t>(t.nodes.size() - 1);
}

int32_t binarize_rec(BinTree& t, const QTree& qt, int32_t qn, uint8_t side) {
  const uint32_t tdepth = 2 * qt.nodes[qn].depth;
  int32_t id = new_tnode(t, tdepth, side);
  if (qt.nodes[qn].is_leaf()) {
    t.nodes[id].leaf_count = 1;
    t.leaves.push_back(id);
    return id;
  }
  uint32_t total = 0;
  for (int yb = 0; yb < 2; ++yb) {
    int32_t c0 = qt.nodes[qn].child[2 * yb];
    int32_t c1 = qt.nodes[qn].child[2 * yb + 1];
    bool a0 = qt.nodes[c0].value != 0;
    bool a1 = qt.nodes[c1].value != 0;
    if (!a0 && !a1) continue;
    int32_t mid = new_tnode(t, tdepth + 1, static_cast<uint8_t>(yb));
    int32_t l = a0 ? binarize_rec(t, qt, c0, 0) : -1;
    int32_t r = a1 ? binarize_rec(t, qt, c1, 1) : -1;
    t.nodes[mid].left = l;
    t.nodes[mid].right = r;
    uint32_t lc = (l >= 0 ? t.nodes[l].leaf_count : 0) +
                  (r >= 0 ? t.nodes[r].leaf_count : 0);
    t.nodes[mid].leaf_count = lc;
    total += lc;
    if (yb == 0) t.nodes[id].left = mid; else t.nodes[id].right = mid;
  }
  t.nodes[id].leaf_count = total;
  return id;
}

}  // namespace

BinTree binarize(const QTree& qt) {
  BinTree t;
  t.grid = qt.grid;
  if (qt.nodes[0].value == 0) return t;  // empty set
  binarize_rec(t, qt, 0, 0);
  return t;
}

std::vector<int32_t> HeavyPaths::path_nodes(const BinTree& t, size_t path) const {
  std::vector<int32_t> out;
  for (int32_t v = top.at(path); v >= 0; v = heavy_child[v]) out.push_back(v);
  (void)t;
  return out;
}

HeavyPaths decompose(const BinTree& t) {
  HeavyPaths hp;
  const size_t nn = t.nodes.size();
  hp.heavy_child.assign(nn, -1);
  hp.path_of.assign(nn, 0);
  if (nn == 0) return hp;

  for (size_t v = 0; v < nn; ++v) {
    int32_t l = t.nodes[v].left, r = t.nodes[v].right;
    if (l >= 0 && r >= 0)
      hp.heavy_child[v] = t.nodes[l].leaf_count >= t.nodes[r].leaf_count ? l : r;
    else if (l >= 0)
      hp.heavy_child[v] = l;
    else if (r >= 0)
      hp.heavy_child[v] = r;
  }

  // Tops: the root plus every child a path does not continue into. The node
  // array is in preorder, so discovery order is deterministic.
  std::vector<int32_t> tops;
  tops.push_back(0);
  for (size_t v = 0; v < nn; ++v) {
    int32_t h = hp.heavy_child[v];
    int32_t l = t.nodes[v].left, r = t.nodes[v].right;
    if (l >= 0 && l != h) tops.push_back(l);
    if (r >= 0 && r != h) tops.push_back(r);
  }

  hp.top.reserve(tops.size());
  hp.start_depth.reserve(tops.size());
  for (int32_t tp : tops) {
    uint32_t pid = static_cast<uint32_t>(hp.top.size());
    hp.top.push_back(tp);
    hp.start_depth.push_back(t.nodes[tp].depth);
    for (int32_t v = tp; v >= 0; v = hp.heavy_child[v]) hp.path_of[v] = pid;
  }
  return hp;
}

void order_paths(const BinTree& t, HeavyPaths& hp) {
  const uint32_t td = t.grid.label_bits();
  const size_t np = hp.path_count();
  hp.paths_starting_at.assign(td + 1, 0);
  if (np == 0) {
    hp.ranked = true;
    return;
  }

  std::vector<uint32_t> order;  // old path ids in rank order
  std::vector<int32_t> cursor;  // node of each ranked path at the scan depth
  order.reserve(np);
  cursor.reserve(np);
  order.push_back(hp.path_of[0]);
  cursor.push_back(0);
  for (uint32_t d = 0; d < td; ++d) {
    size_t sz = order.size();
    for (size_t r = 0; r < sz; ++r) {
      int32_t v = cursor[r];
      int32_t h = hp.heavy_child[v];
      int32_t l = t.nodes[v].left, rt = t.nodes[v].right;
      if (l >= 0 && rt >= 0) {
        int32_t off = h == l ? rt : l;
        order.push_back(hp.path_of[off]);
        cursor.push_back(off);
      }
      cursor[r] = h;
    }
  }
  assert(order.size() == np);

  std::vector<uint32_t> rank_of(np);
  for (size_t r = 0; r < np; ++r) rank_of[order[r]] = static_cast<uint32_t>(r);

  std::vector<int32_t> top(np);
  std::vector<uint32_t> start(np);
  for (size_t old = 0; old < np; ++old) {
    top[rank_of[old]] = hp.top[old];
    start[rank_of[old]] = hp.start_depth[old];
  }
  hp.top = std::move(top);
  hp.start_depth = std::move(start);
  for (uint32_t& pid : hp.path_of) pid = rank_of[pid];
  for (uint32_t s : hp.start_depth) ++hp.paths_starting_at[s];
  hp.ranked = true;
}

HPIndex encode(const BinTree& t, const HeavyPaths& hp,
               std::vector<int32_t>* pos_to_node) {
  if (!hp.ranked) throw std::logic_error("encode: paths are not ranked");
  const uint32_t td = t.grid.label_bits();

  BitBuffer enc;
  if (pos_to_node) pos_to_node->clear();
  for (size_t r = 0; r < hp.path_count(); ++r)
    for (int32_t v = hp.top[r]; v >= 0; v = hp.heavy_child[v]) {
      enc.push_back(t.nodes[v].side != 0);
      if (pos_to_node) pos_to_node->push_back(v);
    }

  std::vector<BitBuffer> branch(td);
  std::vector<int32_t> cursor(hp.path_count());
  for (size_t r = 0; r < hp.path_count(); ++r) cursor[r] = hp.top[r];
  size_t live = hp.path_count() ? hp.paths_starting_at[0] : 0;
  for (uint32_t d = 0; d < td; ++d) {
    for (size_t r = 0; r < live; ++r) {
      int32_t v = cursor[r];
      branch[d].push_back(t.nodes[v].left >= 0 && t.nodes[v].right >= 0);
      cursor[r] = hp.heavy_child[v];
    }
    live += hp.paths_starting_at[d + 1];
  }

  std::vector<uint64_t> ps = hp.paths_starting_at;
  if (ps.empty()) ps.assign(td + 1, 0);
  return HPIndex::assemble(t.grid, t.n(), std::move(enc), std::move(branch),
                           std::move(ps));
}

PointSet decode(const HPIndex& idx) {
  std::vector<Point> pts;
  const uint32_t td = idx.grid().label_bits();
  if (!idx.empty()) {
    struct Frame {
      NodeRef ref;
      uint64_t numeral;
    };
    std::vector<Frame> stack;
    stack.push_back({idx.root(), 0});
    pts.reserve(idx.n());
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (f.ref.depth == td) {
        pts.push_back(deinterleave(PathLabel{f.numeral, td}, idx.grid()));
        continue;
      }
      HPIndex::Children ch = idx.children(f.ref);
      if (ch.count == 2) {
        uint64_t off_bit = ch.on_path_is_right ? 0 : 1;
        stack.push_back({ch.off_path, (f.numeral << 1) | off_bit});
      }
      uint64_t on_bit = ch.on_path_is_right ? 1 : 0;
      stack.push_back({ch.on_path, (f.numeral << 1) | on_bit});
    }
  }
  size_t raw = pts.size();
  PointSet ps = PointSet::from_points(idx.grid(), std::move(pts));
  if (ps.size() != raw || ps.size() != idx.n())
    throw CorruptIndexError("decode: leaf labels are not unique");
  return ps;
}

HPIndex build_hp_index(const PointSet& ps) {
  BinTree t;
  {
    QTree qt = build_quadtree(ps);
    t = binarize(qt);
  }
  HeavyPaths hp = decompose(t);
  order_paths(t, hp);
  return encode(t, hp);
}

}  // namespace hpq
