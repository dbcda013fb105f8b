#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hpq/builder.hpp"
#include "hpq/hpindex.hpp"
#include "hpq/k2.hpp"

namespace hpq {

// Filesystem trouble: missing or unwritable files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad line in a points file.
struct PointsParseError : std::runtime_error {
  PointsParseError(const std::string& what, size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_no(line) {}
  size_t line_no;
};

using AnyIndex = std::variant<HPIndex, K2Index>;

// Index file layout, all integers little-endian:
//   magic "HPQ1", structure tag (0 = hp, 1 = k2), flags (bit 0 = empty),
//   lg_u, one reserved byte, n as 8 bytes.
//   hp: per-start-depth path counts (2*lg_u+1 x 8 bytes), the encoding bit
//       length (8 bytes), then the encoding words and the branch vector
//       words per depth, each payload padded to whole words.
//   k2: per-level bit lengths (lg_u x 8 bytes), then the level words.
// Rank and select directories are rebuilt on load. Loading rejects any
// length or count that disagrees with the header.
std::string serialize(const HPIndex& idx);
std::string serialize(const K2Index& idx);
AnyIndex parse_index(const std::string& bytes);

void save_index(const std::string& path, const HPIndex& idx);
void save_index(const std::string& path, const K2Index& idx);
AnyIndex load_index(const std::string& path);

// Points files: one "x y" pair per line, decimal; blank lines and lines
// starting with '#' are skipped. Order and duplicates are preserved.
std::vector<Point> read_points_file(const std::string& path, GridSpec g);
void write_points_file(const std::string& path, const std::vector<Point>& pts);

}  // namespace hpq
