#include <doctest.h>

#include <random>
#include <set>

#include "hpq/builder.hpp"
#include "hpq/k2.hpp"
#include "hpq/oracle.hpp"
#include "golden16.hpp"
#include "test_util.hpp"

using namespace hpq;

namespace {

PointSet random_set(std::mt19937_64& rng, uint64_t n, uint32_t lg_u) {
  GridSpec g = GridSpec::from_levels(lg_u);
  return PointSet::from_points(g, test_util::random_points(rng, n, g));
}

Rect random_rect(std::mt19937_64& rng, GridSpec g) {
  uint64_t x0 = rng() % (g.side() + 1), x1 = rng() % (g.side() + 1);
  uint64_t y0 = rng() % (g.side() + 1), y1 = rng() % (g.side() + 1);
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  return Rect{x0, x1, y0, y1};
}

}  // namespace

TEST_CASE("level shape on the fixture") {
  K2Index idx = K2Index::build(golden16::point_set());
  REQUIRE(idx.level_count() == 4);
  CHECK(idx.level(0).size() == 4);
  CHECK(idx.level(1).size() == 12);
  CHECK(idx.level(2).size() == 24);
  CHECK(idx.level(3).size() == 44);
  CHECK(idx.level(3).ones() == 14);
  // each level spawns four bits per surviving node
  for (uint32_t l = 0; l + 1 < 4; ++l)
    CHECK(idx.level(l + 1).size() == 4 * idx.level(l).ones());
}

TEST_CASE("membership on the fixture grid") {
  K2Index idx = K2Index::build(golden16::point_set());
  std::set<std::pair<uint32_t, uint32_t>> want;
  for (Point p : golden16::points()) want.insert({p.x, p.y});
  for (uint32_t y = 0; y < 16; ++y)
    for (uint32_t x = 0; x < 16; ++x)
      CHECK(idx.contains(Point{x, y}) == (want.count({x, y}) > 0));
}

TEST_CASE("probes count one level per step, misses stop early") {
  K2Index idx = K2Index::build(golden16::point_set());
  for (Point p : golden16::points()) CHECK(idx.probes(p) == 4);
  CHECK(idx.probes(Point{12, 12}) >= 1);   // BR quadrant is occupied
  CHECK(idx.probes(Point{12, 12}) <= 4);
  CHECK_FALSE(idx.contains(Point{12, 12}));
}

TEST_CASE("three-way agreement with the heavy-path index and the hash set") {
  std::mt19937_64 rng(83);
  for (uint32_t lg_u : {1u, 3u, 6u, 10u}) {
    for (uint64_t n : {0ull, 1ull, 25ull, 500ull}) {
      PointSet ps = random_set(rng, n, lg_u);
      K2Index k2 = K2Index::build(ps);
      HPIndex hp = build_hp_index(ps);
      NaiveIndex ref(ps);
      CHECK(k2.n() == ps.size());
      GridSpec g = ps.grid();
      for (int it = 0; it < 1500; ++it) {
        Point p{static_cast<uint32_t>(rng() % g.side()),
                static_cast<uint32_t>(rng() % g.side())};
        bool want = ref.contains(p);
        CHECK(k2.contains(p) == want);
        CHECK(hp.contains(p) == want);
      }
      for (int it = 0; it < 40; ++it) {
        Rect r = random_rect(rng, g);
        std::vector<Point> want = ref.range_report(r);
        CHECK(k2.range_report(r) == want);
        CHECK(hp.range_report(r) == want);
      }
    }
  }
}

TEST_CASE("range report on the fixture") {
  K2Index idx = K2Index::build(golden16::point_set());
  CHECK(idx.range_report(Rect::whole(idx.grid())) == golden16::points());
  CHECK(idx.range_report(Rect{6, 7, 9, 10}) == std::vector<Point>{{6, 9}});
  CHECK(idx.range_report(Rect{13, 16, 13, 16}).empty());
}

TEST_CASE("assemble validates the level recurrence") {
  K2Index built = K2Index::build(golden16::point_set());
  GridSpec g = GridSpec::from_levels(4);
  std::vector<BitBuffer> levels;
  for (uint32_t l = 0; l < 4; ++l) {
    std::vector<uint64_t> words(built.level(l).words().begin(),
                                built.level(l).words().end());
    levels.push_back(BitBuffer::from_words(std::move(words), built.level(l).size()));
  }
  CHECK_NOTHROW(K2Index::assemble(g, 14, levels));
  CHECK_THROWS_AS(K2Index::assemble(g, 15, levels), CorruptIndexError);

  std::vector<BitBuffer> short_levels(levels.begin(), levels.end() - 1);
  CHECK_THROWS_AS(K2Index::assemble(g, 14, short_levels), CorruptIndexError);

  std::vector<BitBuffer> bad = levels;
  bad[1] = golden16::buffer("1111");
  CHECK_THROWS_AS(K2Index::assemble(g, 14, bad), CorruptIndexError);
}

TEST_CASE("degenerate grids") {
  GridSpec unit = GridSpec::from_levels(0);
  K2Index one = K2Index::build(PointSet::from_points(unit, {{0, 0}}));
  CHECK(one.n() == 1);
  CHECK(one.level_count() == 0);
  CHECK(one.contains(Point{0, 0}));

  K2Index none = K2Index::build(PointSet::from_points(unit, {}));
  CHECK(none.empty());
  CHECK_FALSE(none.contains(Point{0, 0}));
  CHECK(none.range_report(Rect::whole(unit)).empty());
}

TEST_CASE("space stats") {
  K2Index idx = K2Index::build(golden16::point_set());
  SpaceStats st = idx.space_stats();
  CHECK(st.n == 14);
  CHECK(st.lg_u == 4);
  CHECK(st.nodes == 85);  // every bitmap bit plus the root
  CHECK(st.bits_h == 4 + 12 + 24);
  CHECK(st.bits_l == 44);
  CHECK(st.total_bits >= st.bits_h + st.bits_l);
  REQUIRE(st.bpp.has_value());
}
