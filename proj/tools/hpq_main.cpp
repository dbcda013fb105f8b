#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hpq/builder.hpp"
#include "hpq/io.hpp"
#include "hpq/k2.hpp"
#include "hpq/oracle.hpp"

namespace {

using nlohmann::ordered_json;

// strict decimal field, so "a,b" reports the expected shape instead of stoull's own message
uint64_t parse_uint_field(const std::string& text, const char* expect) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument(expect);
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(expect);
  }
}

hpq::Point parse_point_arg(const std::string& arg) {
  size_t comma = arg.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("expected x,y");
  uint64_t x = parse_uint_field(arg.substr(0, comma), "expected x,y");
  uint64_t y = parse_uint_field(arg.substr(comma + 1), "expected x,y");
  if (x > UINT32_MAX || y > UINT32_MAX)
    throw std::invalid_argument("coordinate out of range");
  return hpq::Point{static_cast<uint32_t>(x), static_cast<uint32_t>(y)};
}

hpq::Rect parse_rect_arg(const std::string& arg) {
  uint64_t v[4];
  size_t at = 0;
  for (int i = 0; i < 4; ++i) {
    size_t next = i < 3 ? arg.find(',', at) : arg.size();
    if (next == std::string::npos) throw std::invalid_argument("expected x0,y0,x1,y1");
    v[i] = parse_uint_field(arg.substr(at, next - at), "expected x0,y0,x1,y1");
    at = next + 1;
  }
  return hpq::Rect{v[0], v[2], v[1], v[3]};
}

hpq::GridSpec grid_of(const hpq::AnyIndex& idx) {
  return std::visit([](const auto& i) { return i.grid(); }, idx);
}

int run_build(const std::string& points_path, uint32_t lg_u,
              const std::string& structure, const std::string& out) {
  hpq::GridSpec g = hpq::GridSpec::from_levels(lg_u);
  std::vector<hpq::Point> raw = hpq::read_points_file(points_path, g);
  hpq::PointSet ps = hpq::PointSet::from_points(g, std::move(raw));
  if (structure == "hp")
    hpq::save_index(out, hpq::build_hp_index(ps));
  else
    hpq::save_index(out, hpq::K2Index::build(ps));
  return 0;
}

int run_query(const std::string& index_path, const std::string& point_arg,
              const std::string& batch_path, bool trace) {
  hpq::AnyIndex idx = hpq::load_index(index_path);
  std::vector<hpq::Point> pts;
  if (!point_arg.empty()) pts.push_back(parse_point_arg(point_arg));
  if (!batch_path.empty()) {
    std::vector<hpq::Point> more = hpq::read_points_file(batch_path, grid_of(idx));
    pts.insert(pts.end(), more.begin(), more.end());
  }
  if (pts.empty()) throw std::invalid_argument("query: no points given");
  const hpq::HPIndex* hp = std::get_if<hpq::HPIndex>(&idx);
  if (trace && !hp)
    throw std::invalid_argument("query: --trace needs a heavy-path index");
  std::string out;
  for (const hpq::Point& p : pts) {
    if (trace) {
      hpq::QueryTrace tr = hp->membership(p);
      out += tr.member ? '1' : '0';
      out += " segments=" + std::to_string(tr.segments) + " lcp=";
      for (size_t i = 0; i < tr.lcp_lengths.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(tr.lcp_lengths[i]);
      }
      out += '\n';
    } else {
      bool hit = std::visit([&p](const auto& i) { return i.contains(p); }, idx);
      out += hit ? "1\n" : "0\n";
    }
  }
  std::fputs(out.c_str(), stdout);
  return 0;
}

int run_range(const std::string& index_path, const std::string& rect_arg) {
  hpq::AnyIndex idx = hpq::load_index(index_path);
  hpq::Rect r = parse_rect_arg(rect_arg);
  std::vector<hpq::Point> pts =
      std::visit([&r](const auto& i) { return i.range_report(r); }, idx);
  std::string out;
  for (const hpq::Point& p : pts)
    out += std::to_string(p.x) + " " + std::to_string(p.y) + "\n";
  std::fputs(out.c_str(), stdout);
  return 0;
}

int run_stats(const std::string& index_path) {
  hpq::AnyIndex idx = hpq::load_index(index_path);
  hpq::SpaceStats st =
      std::visit([](const auto& i) { return i.space_stats(); }, idx);
  ordered_json j;
  j["structure"] = std::holds_alternative<hpq::HPIndex>(idx) ? "hp" : "k2";
  j["n"] = st.n;
  j["lg_u"] = st.lg_u;
  j["nodes"] = st.nodes;
  j["bits_total"] = st.total_bits;
  if (st.bpp) j["bpp"] = *st.bpp;
  j["bits_H"] = st.bits_h;
  j["bits_L"] = st.bits_l;
  std::fputs((j.dump() + "\n").c_str(), stdout);
  return 0;
}

int run_gen(const std::string& mode, uint64_t n, uint32_t lg_u, uint32_t clusters,
            uint64_t diameter, uint64_t seed, const std::string& out) {
  hpq::GridSpec g = hpq::GridSpec::from_levels(lg_u);
  hpq::PointSet ps;
  if (mode == "uniform") {
    ps = hpq::gen_uniform(n, g, seed);
  } else {
    hpq::ClusterSpec spec = hpq::make_cluster_spec(n, clusters, diameter, g, seed);
    ps = hpq::gen_clustered(spec, g, seed + 1);
  }
  hpq::write_points_file(out, ps.points());
  return 0;
}

int run_bench(const std::string& index_path, const std::string& queries_path,
              const std::string& cls, uint32_t repeat) {
  if (repeat < 3) throw std::invalid_argument("bench: need at least 3 repetitions");
  hpq::AnyIndex idx = hpq::load_index(index_path);
  std::vector<hpq::Point> queries = hpq::read_points_file(queries_path, grid_of(idx));
  if (queries.empty()) throw std::invalid_argument("bench: no queries");

  // untimed pass: checksum plus the per-query work measure
  uint64_t segments = 0, hits = 0;
  if (const hpq::HPIndex* hp = std::get_if<hpq::HPIndex>(&idx)) {
    for (const hpq::Point& p : queries) {
      hpq::QueryTrace tr = hp->membership(p);
      segments += tr.segments;
      hits += tr.member;
    }
  } else {
    const hpq::K2Index& k2 = std::get<hpq::K2Index>(idx);
    for (const hpq::Point& p : queries) {
      segments += k2.probes(p);
      hits += k2.contains(p);
    }
  }

  uint64_t check = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (uint32_t rep = 0; rep < repeat; ++rep)
    std::visit(
        [&queries, &check](const auto& i) {
          for (const hpq::Point& p : queries) check += i.contains(p);
        },
        idx);
  auto t1 = std::chrono::steady_clock::now();
  if (check != hits * repeat) throw std::runtime_error("bench: unstable results");

  double ns = static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  double ns_per_query = ns / (static_cast<double>(repeat) * queries.size());
  double mean_segments = static_cast<double>(segments) / queries.size();
  hpq::SpaceStats st = std::visit([](const auto& i) { return i.space_stats(); }, idx);

  std::string bpp;
  if (st.bpp) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *st.bpp);
    bpp = buf;
  }
  char row[256];
  std::snprintf(row, sizeof row, "%s,%s,%" PRIu64 ",%u,%s,%.2f,%.4f\n",
                cls.c_str(),
                std::holds_alternative<hpq::HPIndex>(idx) ? "hp" : "k2", st.n,
                st.lg_u, bpp.c_str(), ns_per_query, mean_segments);
  std::fputs("class,structure,n,lg_u,bpp,ns_per_query,mean_segments\n", stdout);
  std::fputs(row, stdout);
  return 0;
}

int run_decode(const std::string& index_path, const std::string& out) {
  hpq::AnyIndex idx = hpq::load_index(index_path);
  std::vector<hpq::Point> pts;
  if (const hpq::HPIndex* hp = std::get_if<hpq::HPIndex>(&idx))
    pts = hpq::decode(*hp).points();
  else
    pts = std::get<hpq::K2Index>(idx).range_report(
        hpq::Rect::whole(grid_of(idx)));
  hpq::write_points_file(out, pts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Succinct quadtree toolkit: build, query and measure point-set indexes"};
  app.require_subcommand(1);

  std::string points_path, index_path, out_path, structure = "hp";
  std::string point_arg, batch_path, rect_arg, mode = "uniform", cls = "filled";
  std::string queries_path;
  uint32_t lg_u = 0, clusters = 0, repeat = 3;
  uint64_t n = 0, diameter = 0, seed = 1;
  bool trace = false;

  CLI::App* build = app.add_subcommand("build", "Build an index from a points file");
  build->add_option("--points", points_path, "input points file")->required();
  build->add_option("--lg-u", lg_u, "grid levels")->required();
  build->add_option("--structure", structure, "hp or k2")
      ->check(CLI::IsMember({"hp", "k2"}));
  build->add_option("--out", out_path, "output index file")->required();

  CLI::App* query = app.add_subcommand("query", "Point membership");
  query->add_option("index", index_path, "index file")->required();
  query->add_option("--point", point_arg, "single query x,y");
  query->add_option("--batch", batch_path, "points file with queries");
  query->add_flag("--trace", trace, "print segments and per-segment lcp");

  CLI::App* range = app.add_subcommand("range", "Report points in a rectangle");
  range->add_option("index", index_path, "index file")->required();
  range->add_option("--rect", rect_arg, "x0,y0,x1,y1 half-open")->required();

  CLI::App* stats = app.add_subcommand("stats", "Space accounting as JSON");
  stats->add_option("index", index_path, "index file")->required();

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic points file");
  gen->add_option("--mode", mode, "uniform or clusters")
      ->check(CLI::IsMember({"uniform", "clusters"}));
  gen->add_option("--n", n, "number of points")->required();
  gen->add_option("--lg-u", lg_u, "grid levels")->required();
  gen->add_option("--clusters", clusters, "cluster count");
  gen->add_option("--diameter", diameter, "cluster square side");
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--out", out_path, "output points file")->required();

  CLI::App* bench = app.add_subcommand("bench", "Time membership queries, CSV row");
  bench->add_option("index", index_path, "index file")->required();
  bench->add_option("--queries", queries_path, "points file with queries")->required();
  bench->add_option("--class", cls, "query class label")
      ->check(CLI::IsMember({"empty", "filled", "isolated"}));
  bench->add_option("--repeat", repeat, "timed repetitions, at least 3");

  CLI::App* decode = app.add_subcommand("decode", "Write the point set back out");
  decode->add_option("index", index_path, "index file")->required();
  decode->add_option("--out", out_path, "output points file")->required();

  try {
    app.parse(argc, argv);
    if (build->parsed())
      return run_build(points_path, lg_u, structure, out_path);
    if (query->parsed())
      return run_query(index_path, point_arg, batch_path, trace);
    if (range->parsed()) return run_range(index_path, rect_arg);
    if (stats->parsed()) return run_stats(index_path);
    if (gen->parsed()) {
      if (mode == "clusters" && (clusters == 0 || diameter == 0))
        throw std::invalid_argument("gen: clusters mode needs --clusters and --diameter");
      return run_gen(mode, n, lg_u, clusters, diameter, seed, out_path);
    }
    if (bench->parsed())
      return run_bench(index_path, queries_path, cls, repeat);
    if (decode->parsed()) return run_decode(index_path, out_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const hpq::CorruptIndexError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
