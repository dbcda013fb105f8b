#include "hpq/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hpq {

namespace {

constexpr char kMagic[4] = {'H', 'P', 'Q', '1'};
constexpr uint8_t kTagHp = 0;
constexpr uint8_t kTagK2 = 1;
constexpr uint8_t kFlagEmpty = 1;

void append_u64(std::string& s, uint64_t v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_payload(std::string& s, const BitVector& bv) {
  size_t nw = (bv.size() + 63) / 64;
  for (size_t i = 0; i < nw; ++i) append_u64(s, bv.words()[i]);
}

void append_header(std::string& s, uint8_t tag, GridSpec g, uint64_t n) {
  s.append(kMagic, 4);
  s.push_back(static_cast<char>(tag));
  s.push_back(static_cast<char>(n == 0 ? kFlagEmpty : 0));
  s.push_back(static_cast<char>(g.lg_u));
  s.push_back(0);
  append_u64(s, n);
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  uint8_t u8() {
    if (pos + 1 > s.size()) throw CorruptIndexError("index file truncated");
    return static_cast<uint8_t>(s[pos++]);
  }
  uint64_t u64() {
    if (pos + 8 > s.size()) throw CorruptIndexError("index file truncated");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<uint8_t>(s[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  BitBuffer payload(uint64_t bits) {
    if (bits / 8 > s.size() - pos) throw CorruptIndexError("index file truncated");
    size_t nw = static_cast<size_t>((bits + 63) / 64);
    std::vector<uint64_t> words;
    words.reserve(nw);
    for (size_t i = 0; i < nw; ++i) words.push_back(u64());
    if (bits % 64 && !words.empty() && (words.back() >> (bits % 64)) != 0)
      throw CorruptIndexError("padding bits are not zero");
    return BitBuffer::from_words(std::move(words), bits);
  }
  void done() {
    if (pos != s.size()) throw CorruptIndexError("trailing bytes in index file");
  }
};

}  // namespace

std::string serialize(const HPIndex& idx) {
  std::string s;
  append_header(s, kTagHp, idx.grid(), idx.n());
  for (uint64_t v : idx.paths_starting_at()) append_u64(s, v);
  append_u64(s, idx.path_enc().size());
  append_payload(s, idx.path_enc());
  for (uint32_t d = 0; d < idx.grid().label_bits(); ++d)
    append_payload(s, idx.branch(d));
  return s;
}

std::string serialize(const K2Index& idx) {
  std::string s;
  append_header(s, kTagK2, idx.grid(), idx.n());
  for (uint32_t l = 0; l < idx.grid().lg_u; ++l) append_u64(s, idx.level(l).size());
  for (uint32_t l = 0; l < idx.grid().lg_u; ++l) append_payload(s, idx.level(l));
  return s;
}

AnyIndex parse_index(const std::string& bytes) {
  Cursor c{bytes};
  char magic[4];
  for (int i = 0; i < 4; ++i) magic[i] = static_cast<char>(c.u8());
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw CorruptIndexError("bad magic");
  uint8_t tag = c.u8();
  uint8_t flags = c.u8();
  uint8_t lg_u = c.u8();
  c.u8();  // reserved
  if (lg_u > GridSpec::kMaxLgU) throw CorruptIndexError("lg_u out of range");
  GridSpec g = GridSpec::from_levels(lg_u);
  uint64_t n = c.u64();
  if ((n == 0) != ((flags & kFlagEmpty) != 0))
    throw CorruptIndexError("empty flag disagrees with n");

  if (tag == kTagHp) {
    const uint32_t td = g.label_bits();
    std::vector<uint64_t> ps(td + 1);
    for (uint64_t& v : ps) v = c.u64();
    uint64_t enc_bits = c.u64();
    // branch lengths are implied by the start-depth counts
    std::vector<uint64_t> cum(td + 2, 0);
    for (uint32_t s = 0; s <= td; ++s) {
      if (ps[s] > n) throw CorruptIndexError("start-depth count exceeds n");
      cum[s + 1] = cum[s] + ps[s];
    }
    uint64_t expect_bits = 0;
    for (uint32_t s = 0; s <= td; ++s) expect_bits += ps[s] * (td + 1 - s);
    if (enc_bits != expect_bits)
      throw CorruptIndexError("encoding length disagrees with path counts");
    BitBuffer enc = c.payload(enc_bits);
    std::vector<BitBuffer> branch;
    branch.reserve(td);
    for (uint32_t d = 0; d < td; ++d) branch.push_back(c.payload(cum[d + 1]));
    c.done();
    return HPIndex::assemble(g, n, std::move(enc), std::move(branch), std::move(ps));
  }
  if (tag == kTagK2) {
    std::vector<uint64_t> lens(g.lg_u);
    for (uint64_t& v : lens) v = c.u64();
    std::vector<BitBuffer> levels;
    levels.reserve(g.lg_u);
    for (uint32_t l = 0; l < g.lg_u; ++l) {
      if (lens[l] > 4 * g.cells()) throw CorruptIndexError("level length out of range");
      levels.push_back(c.payload(lens[l]));
    }
    c.done();
    return K2Index::assemble(g, n, std::move(levels));
  }
  throw CorruptIndexError("unknown structure tag");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace

void save_index(const std::string& path, const HPIndex& idx) {
  write_file(path, serialize(idx));
}

void save_index(const std::string& path, const K2Index& idx) {
  write_file(path, serialize(idx));
}

AnyIndex load_index(const std::string& path) { return parse_index(read_file(path)); }

std::vector<Point> read_points_file(const std::string& path, GridSpec g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Point> pts;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t at = line.find_first_not_of(" \t");
    if (at == std::string::npos || line[at] == '#') continue;
    const char* s = line.data() + at;
    const char* end = line.data() + line.size();
    uint64_t xy[2];
    for (int i = 0; i < 2; ++i) {
      auto [next, ec] = std::from_chars(s, end, xy[i]);
      if (ec != std::errc())
        throw PointsParseError("expected two coordinates", line_no);
      s = next;
      if (i == 0) {
        if (s == end || (*s != ' ' && *s != '\t'))
          throw PointsParseError("expected two coordinates", line_no);
        while (s < end && (*s == ' ' || *s == '\t')) ++s;
      }
    }
    while (s < end && (*s == ' ' || *s == '\t')) ++s;
    if (s != end) throw PointsParseError("trailing characters", line_no);
    if (xy[0] >= g.side() || xy[1] >= g.side())
      throw PointsParseError("coordinate out of range", line_no);
    pts.push_back(Point{static_cast<uint32_t>(xy[0]), static_cast<uint32_t>(xy[1])});
  }
  if (in.bad()) throw IoError("cannot read " + path);
  return pts;
}

void write_points_file(const std::string& path, const std::vector<Point>& pts) {
  std::ostringstream ss;
  for (const Point& p : pts) ss << p.x << ' ' << p.y << '\n';
  write_file(path, ss.str());
}

}  // namespace hpq
