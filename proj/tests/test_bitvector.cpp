#include <doctest.h>

#include <random>
#include <vector>

#include "hpq/bitvector.hpp"
#include "test_util.hpp"

using namespace hpq;

namespace {

// linear-scan reference for rank/select
struct SlowBits {
  std::vector<int> bits;

  uint64_t rank1(uint64_t pos) const {
    uint64_t r = 0;
    for (uint64_t i = 0; i < pos; ++i) r += bits[i];
    return r;
  }
  uint64_t select1(uint64_t k) const {
    uint64_t seen = 0;
    for (uint64_t i = 0; i < bits.size(); ++i)
      if (bits[i] && ++seen == k) return i;
    return bits.size();
  }
};

BitBuffer random_buffer(std::mt19937_64& rng, uint64_t len, int density_pct,
                        SlowBits& slow) {
  BitBuffer buf;
  slow.bits.clear();
  for (uint64_t i = 0; i < len; ++i) {
    int b = (rng() % 100) < static_cast<uint64_t>(density_pct);
    buf.push_back(b);
    slow.bits.push_back(b);
  }
  return buf;
}

}  // namespace

TEST_CASE("bit access and size") {
  BitVector v(test_util::buffer("101101"), BitVector::Dirs::rank_select);
  REQUIRE(v.size() == 6);
  CHECK(test_util::to_string(v) == "101101");
  CHECK(v.ones() == 4);
}

TEST_CASE("golden branch vector rank and select") {
  // the depth-4 branch vector of the 16x16 fixture
  BitVector v(test_util::buffer("101101"), BitVector::Dirs::rank_select);
  CHECK(v.rank1(0) == 0);
  CHECK(v.rank1(1) == 1);
  CHECK(v.rank1(3) == 2);
  CHECK(v.rank1(6) == 4);
  CHECK(v.select1(1) == 0);
  CHECK(v.select1(2) == 2);
  CHECK(v.select1(3) == 3);
  CHECK(v.select1(4) == 5);
}

TEST_CASE("rank and select against the linear scan") {
  std::mt19937_64 rng(101);
  SlowBits slow;
  for (uint64_t len : {1ull, 63ull, 64ull, 65ull, 511ull, 512ull, 513ull,
                       100000ull}) {
    for (int density : {2, 50, 97}) {
      BitVector v(random_buffer(rng, len, density, slow),
                  BitVector::Dirs::rank_select);
      REQUIRE(v.size() == len);
      uint64_t ones = slow.rank1(len);
      CHECK(v.ones() == ones);
      for (int it = 0; it < 400; ++it) {
        uint64_t pos = rng() % (len + 1);
        CHECK(v.rank1(pos) == slow.rank1(pos));
      }
      for (uint64_t k = 1; k <= ones; k += 1 + ones / 300) {
        uint64_t pos = slow.select1(k);
        CHECK(v.select1(k) == pos);
        CHECK(v.rank1(pos) == k - 1);
        CHECK(v.rank1(pos + 1) == k);
      }
    }
  }
}

TEST_CASE("all-zero and all-one vectors") {
  for (uint64_t len : {1ull, 512ull, 1024ull, 4097ull}) {
    BitBuffer zero, one;
    for (uint64_t i = 0; i < len; ++i) {
      zero.push_back(0);
      one.push_back(1);
    }
    BitVector z(zero, BitVector::Dirs::rank_select);
    BitVector o(one, BitVector::Dirs::rank_select);
    CHECK(z.ones() == 0);
    CHECK(z.rank1(len) == 0);
    CHECK(o.ones() == len);
    CHECK(o.rank1(len) == len);
    CHECK(o.select1(1) == 0);
    CHECK(o.select1(len) == len - 1);
  }
}

TEST_CASE("empty vector") {
  BitVector v(BitBuffer{}, BitVector::Dirs::rank_select);
  CHECK(v.size() == 0);
  CHECK(v.ones() == 0);
  CHECK(v.rank1(0) == 0);
}

TEST_CASE("directory overhead stays within half the payload") {
  std::mt19937_64 rng(55);
  SlowBits slow;
  for (uint64_t len : {1024ull, 1536ull, 4096ull, 100000ull, 1000000ull}) {
    BitVector v(random_buffer(rng, len, 50, slow),
                BitVector::Dirs::rank_select);
    CHECK(v.directory_bits() * 2 <= len);
  }
}

TEST_CASE("plain vectors carry no directory") {
  std::mt19937_64 rng(56);
  SlowBits slow;
  BitVector v(random_buffer(rng, 4096, 50, slow), BitVector::Dirs::none);
  CHECK(v.directory_bits() == 0);
  for (uint64_t i = 0; i < 4096; ++i) CHECK(v.bit(i) == uint64_t(slow.bits[i]));
}

TEST_CASE("out-of-range queries throw") {
  BitVector v(test_util::buffer("101101"), BitVector::Dirs::rank_select);
  CHECK_THROWS_AS(v.access(6), std::out_of_range);
  CHECK_THROWS_AS(v.rank1(7), std::out_of_range);
  CHECK_THROWS_AS(v.select1(0), std::out_of_range);
  CHECK_THROWS_AS(v.select1(5), std::out_of_range);
}

TEST_CASE("words round-trip through from_words") {
  std::mt19937_64 rng(77);
  SlowBits slow;
  BitVector v(random_buffer(rng, 777, 50, slow), BitVector::Dirs::rank_select);
  std::vector<uint64_t> words(v.words().begin(), v.words().end());
  BitBuffer copy = BitBuffer::from_words(std::move(words), v.size());
  BitVector w(copy, BitVector::Dirs::rank_select);
  CHECK(test_util::to_string(w) == test_util::to_string(v));
  CHECK(w.ones() == v.ones());
}
