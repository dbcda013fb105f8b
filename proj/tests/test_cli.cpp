#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hpq/io.hpp"
#include "hpq/oracle.hpp"
#include "golden16.hpp"

using namespace hpq;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
};

// Runs the installed binary with the given arguments, stderr dropped.
CmdResult run(const std::string& args) {
  const char* bin = std::getenv("HPQ_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

// Per-process scratch directory, wiped when the binary exits.
const fs::path& work_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() /
                 ("hpq_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return root;
}

struct RootGuard {
  ~RootGuard() {
    std::error_code ec;
    fs::remove_all(work_root(), ec);
  }
} root_guard;

std::string path_in(const char* name) { return (work_root() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden_points_path() {
  static std::string path = [] {
    std::string p = path_in("golden.pts");
    write_points_file(p, golden16::points());
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run("--help").code == 0);
  CHECK(run("query --help").code == 0);
}

TEST_CASE("build, query and trace the fixture") {
  std::string idx = path_in("golden.hpq");
  CmdResult b = run("build --points " + golden_points_path() +
                    " --lg-u 4 --structure hp --out " + idx);
  REQUIRE(b.code == 0);

  CHECK(run("query " + idx + " --point 6,9").out == "1\n");
  CHECK(run("query " + idx + " --point 0,0").out == "0\n");
  CHECK(run("query " + idx + " --point 6,9 --trace").out ==
        "1 segments=3 lcp=0,6,2\n");
  CmdResult miss = run("query " + idx + " --point 0,0 --trace");
  CHECK(miss.out == "0 segments=1 lcp=5\n");
}

TEST_CASE("range reporting in label order") {
  std::string idx = path_in("golden.hpq");
  CmdResult all = run("range " + idx + " --rect 0,0,16,16");
  REQUIRE(all.code == 0);
  std::string want;
  for (Point p : golden16::points())
    want += std::to_string(p.x) + " " + std::to_string(p.y) + "\n";
  CHECK(all.out == want);
  CHECK(run("range " + idx + " --rect 6,9,7,10").out == "6 9\n");
  CHECK(run("range " + idx + " --rect 13,13,16,16").out.empty());
}

TEST_CASE("stats emits the pinned json fields") {
  CmdResult st = run("stats " + path_in("golden.hpq"));
  REQUIRE(st.code == 0);
  CHECK(st.out.find("\"structure\":\"hp\"") != std::string::npos);
  CHECK(st.out.find("\"n\":14") != std::string::npos);
  CHECK(st.out.find("\"nodes\":64") != std::string::npos);
  CHECK(st.out.find("\"bits_H\":64") != std::string::npos);
  CHECK(st.out.find("\"bits_L\":50") != std::string::npos);
  CHECK(st.out.find("\"bpp\":") != std::string::npos);
}

TEST_CASE("decode writes the canonical point set back") {
  std::string out = path_in("decoded.pts");
  REQUIRE(run("decode " + path_in("golden.hpq") + " --out " + out).code == 0);
  CHECK(slurp(out) == slurp(golden_points_path()));
}

TEST_CASE("k2 builds answer the same queries") {
  std::string idx = path_in("golden.k2q");
  REQUIRE(run("build --points " + golden_points_path() +
              " --lg-u 4 --structure k2 --out " + idx)
              .code == 0);
  CHECK(run("query " + idx + " --point 6,9").out == "1\n");
  CHECK(run("query " + idx + " --point 0,0").out == "0\n");
  CHECK(run("stats " + idx).out.find("\"structure\":\"k2\"") != std::string::npos);
  CHECK(run("query " + idx + " --point 6,9 --trace").code == 2);

  std::string out = path_in("decoded_k2.pts");
  REQUIRE(run("decode " + idx + " --out " + out).code == 0);
  CHECK(slurp(out) == slurp(golden_points_path()));
}

TEST_CASE("rebuilds are byte-identical") {
  std::string a = path_in("re_a.hpq"), b = path_in("re_b.hpq");
  REQUIRE(run("build --points " + golden_points_path() +
              " --lg-u 4 --structure hp --out " + a).code == 0);
  REQUIRE(run("build --points " + golden_points_path() +
              " --lg-u 4 --structure hp --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("generated batches agree with the reference") {
  std::string pts = path_in("gen.pts");
  REQUIRE(run("gen --mode uniform --n 300 --lg-u 7 --seed 5 --out " + pts)
              .code == 0);
  std::string again = path_in("gen2.pts");
  REQUIRE(run("gen --mode uniform --n 300 --lg-u 7 --seed 5 --out " + again)
              .code == 0);
  CHECK(slurp(pts) == slurp(again));

  std::string idx = path_in("gen.hpq");
  REQUIRE(run("build --points " + pts + " --lg-u 7 --structure hp --out " + idx)
              .code == 0);

  GridSpec g = GridSpec::from_levels(7);
  PointSet ps = PointSet::from_points(g, read_points_file(pts, g));
  REQUIRE(ps.size() == 300);
  NaiveIndex ref(ps);

  std::vector<Point> probes;
  std::string want;
  for (size_t i = 0; i < ps.points().size(); i += 3) {
    Point p = ps.points()[i];
    probes.push_back(p);
    want += "1\n";
    Point q{(p.x + 1) % 128, p.y};
    probes.push_back(q);
    want += ref.contains(q) ? "1\n" : "0\n";
  }
  std::string batch = path_in("probes.pts");
  write_points_file(batch, probes);
  CmdResult r = run("query " + idx + " --batch " + batch);
  REQUIRE(r.code == 0);
  CHECK(r.out == want);
}

TEST_CASE("clustered generation needs its knobs") {
  CHECK(run("gen --mode clusters --n 100 --lg-u 8 --out " + path_in("x.pts"))
            .code == 2);
  CHECK(run("gen --mode clusters --n 100 --lg-u 8 --clusters 4 --diameter 8 "
            "--out " + path_in("cl.pts")).code == 0);
}

TEST_CASE("bench prints one csv row") {
  CmdResult r = run("bench " + path_in("golden.hpq") + " --queries " +
                    golden_points_path() + " --class filled --repeat 5");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row, extra;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(header == "class,structure,n,lg_u,bpp,ns_per_query,mean_segments");
  CHECK(row.compare(0, 15, "filled,hp,14,4,") == 0);
  size_t commas = 0;
  for (char c : row) commas += c == ',';
  CHECK(commas == 6);

  CHECK(run("bench " + path_in("golden.hpq") + " --queries " +
            golden_points_path() + " --repeat 2").code == 2);
  CHECK(run("bench " + path_in("golden.hpq") + " --queries " +
            golden_points_path() + " --class warm").code == 2);
}

TEST_CASE("failures map to the documented exit codes") {
  // missing files
  CHECK(run("query " + path_in("absent.hpq") + " --point 1,1").code == 2);
  CHECK(run("build --points " + path_in("absent.pts") +
            " --lg-u 4 --out " + path_in("x.hpq")).code == 2);
  // malformed command lines
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("query").code == 2);
  CHECK(run("query " + path_in("golden.hpq")).code == 2);
  CHECK(run("query " + path_in("golden.hpq") + " --point 6:9").code == 2);
  CHECK(run("range " + path_in("golden.hpq") + " --rect 0,0,16").code == 2);
  // out-of-grid point
  CHECK(run("query " + path_in("golden.hpq") + " --point 16,0").code == 2);
  // corrupt index bytes
  std::string good = slurp(path_in("golden.hpq"));
  std::string bad = path_in("bad.hpq");
  std::ofstream(bad, std::ios::binary) << good.substr(0, good.size() - 3);
  CHECK(run("query " + bad + " --point 1,1").code == 3);
  std::ofstream(bad, std::ios::binary) << (good + "!");
  CHECK(run("stats " + bad).code == 3);
  // bad points file reports a parse failure
  std::string badpts = path_in("bad.pts");
  std::ofstream(badpts) << "1 2\nfoo\n";
  CHECK(run("build --points " + badpts + " --lg-u 4 --out " +
            path_in("y.hpq")).code == 2);
}
