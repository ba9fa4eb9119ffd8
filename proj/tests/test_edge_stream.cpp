#include <doctest.h>

#include <fstream>

#include "gnnpart/edge_stream.hpp"
#include "oracles.hpp"

using namespace gnnpart;

namespace {

std::vector<Edge> collect(const EdgeStream& s) {
  std::vector<Edge> out;
  s.for_each([&out](const Edge& e) { out.push_back(e); });
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("edge_stream");

TEST_CASE("text format decodes tab-separated pairs") {
  oracle::TempDir tmp("text");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "0\t1\n1\t2\n";
  EdgeStream s(path, EdgeFormat::text_tsv);
  auto edges = collect(s);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == Edge{0, 1});
  CHECK(edges[1] == Edge{1, 2});
  CHECK(s.edge_count() == 2);
  CHECK(s.malformed_lines() == 0);
}

TEST_CASE("empty file yields an empty stream") {
  oracle::TempDir tmp("empty");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path).flush();
  EdgeStream s(path, EdgeFormat::text_tsv);
  CHECK(collect(s).empty());
  CHECK(s.edge_count() == 0);

  auto bin = tmp.path() / "edges.bin";
  std::ofstream(bin, std::ios::binary).flush();
  EdgeStream sb(bin, EdgeFormat::binary_u64);
  CHECK(collect(sb).empty());
}

TEST_CASE("binary raw pair decodes against a reference byte-writer") {
  oracle::TempDir tmp("binary");
  auto path = tmp.path() / "pair.bin";
  {
    // reference little-endian writer, byte by byte
    std::ofstream out(path, std::ios::binary);
    auto put_u64 = [&out](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) out.put(static_cast<char>((x >> (8 * i)) & 0xFF));
    };
    put_u64(7);
    put_u64(9);
  }
  REQUIRE(std::filesystem::file_size(path) == 16);
  EdgeStream s(path, EdgeFormat::binary_u64);
  auto edges = collect(s);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0] == Edge{7, 9});
}

TEST_CASE("binary files written with the magic round-trip") {
  oracle::TempDir tmp("magic");
  auto path = tmp.path() / "edges.bin";
  std::vector<Edge> edges{{1, 2}, {3, 3}, {5, 0}};
  write_binary_edges(path, edges);
  EdgeStream s(path, EdgeFormat::binary_u64);
  CHECK(collect(s) == edges);
}

TEST_CASE("binary payload with a truncated record is rejected") {
  oracle::TempDir tmp("trunc");
  auto path = tmp.path() / "bad.bin";
  std::ofstream(path, std::ios::binary) << "EDG1" << "12345678123";
  CHECK_THROWS_AS(EdgeStream(path, EdgeFormat::binary_u64), DataError);
}

TEST_CASE("missing file is rejected") {
  CHECK_THROWS_AS(EdgeStream("/nonexistent/edges.tsv", EdgeFormat::text_tsv), DataError);
}

TEST_CASE("comments and malformed lines are skipped and counted") {
  oracle::TempDir tmp("malformed");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "# header\n0\t1\nbad line\n2 3\n4\t5\n6\tx\n";
  EdgeStream s(path, EdgeFormat::text_tsv);
  auto edges = collect(s);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == Edge{0, 1});
  CHECK(edges[1] == Edge{4, 5});
  CHECK(s.malformed_lines() == 3);
}

TEST_CASE("two replays are element-wise identical") {
  auto raw = oracle::random_graph(40, 120, 99);
  oracle::TempDir tmp("replay");
  auto path = oracle::write_tsv(tmp.path() / "edges.tsv", raw);
  EdgeStream s(path, EdgeFormat::text_tsv);
  CHECK(collect(s) == collect(s));
}

TEST_CASE("add_reverse emits the reverse after each non-loop edge") {
  oracle::TempDir tmp("reverse");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "0\t1\n2\t2\n";
  EdgeStream s(path, EdgeFormat::text_tsv, /*add_reverse=*/true);
  auto edges = collect(s);
  REQUIRE(edges.size() == 3);
  CHECK(edges[0] == Edge{0, 1});
  CHECK(edges[1] == Edge{1, 0});
  CHECK(edges[2] == Edge{2, 2});
}

TEST_CASE("degrees of a triangle are all two") {
  oracle::TempDir tmp("triangle");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "0\t1\n1\t2\n2\t0\n";
  EdgeStream s(path, EdgeFormat::text_tsv);
  GraphIndex idx = compute_degrees(s);
  REQUIRE(idx.num_nodes() == 3);
  for (NodeId v = 0; v < 3; ++v) CHECK(idx.degree[v] == 2);
}

TEST_CASE("degrees of a single edge") {
  oracle::TempDir tmp("single");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "0\t1\n";
  EdgeStream s(path, EdgeFormat::text_tsv);
  GraphIndex idx = compute_degrees(s);
  CHECK(idx.degree[idx.dense(0)] == 1);
  CHECK(idx.degree[idx.dense(1)] == 1);
}

TEST_CASE("degree sum is twice the independently counted line count") {
  auto raw = oracle::random_graph(60, 150, 5);
  oracle::TempDir tmp("degsum");
  auto path = oracle::write_tsv(tmp.path() / "edges.tsv", raw);

  // oracle: count lines with a plain reader
  std::ifstream in(path);
  std::string line;
  std::uint64_t lines = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++lines;

  EdgeStream s(path, EdgeFormat::text_tsv);
  GraphIndex idx = compute_degrees(s);
  std::uint64_t sum = 0;
  for (auto d : idx.degree) sum += d;
  CHECK(sum == 2 * lines);
  CHECK(idx.num_edges == lines);
}

TEST_CASE("self-loops count twice toward their node's degree") {
  oracle::TempDir tmp("loops");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "0\t0\n0\t1\n";
  EdgeStream s(path, EdgeFormat::text_tsv);
  GraphIndex idx = compute_degrees(s);
  CHECK(idx.degree[idx.dense(0)] == 3);
  CHECK(idx.degree[idx.dense(1)] == 1);
  CHECK(idx.num_self_loops == 1);
}

TEST_CASE("duplicate edges increase degrees") {
  oracle::TempDir tmp("dups");
  auto path = tmp.path() / "edges.tsv";
  std::ofstream(path) << "0\t1\n0\t1\n";
  EdgeStream s(path, EdgeFormat::text_tsv);
  GraphIndex idx = compute_degrees(s);
  CHECK(idx.degree[idx.dense(0)] == 2);
  CHECK(idx.degree[idx.dense(1)] == 2);
}

TEST_CASE("first-pass state does not grow with the edge count") {
  // same node set, 4x the edges: the retained footprint must be identical
  oracle::TempDir tmp("mem");
  std::vector<oracle::RawEdge> small, large;
  for (std::uint64_t i = 0; i < 200; ++i)
    small.push_back({i, (i + 1) % 200});
  large = small;
  for (std::uint64_t k = 2; k <= 4; ++k)
    for (std::uint64_t i = 0; i < 200; ++i)
      large.push_back({i, (i + k) % 200});
  auto p_small = oracle::write_tsv(tmp.path() / "small.tsv", small);
  auto p_large = oracle::write_tsv(tmp.path() / "large.tsv", large);
  GraphIndex a = compute_degrees(EdgeStream(p_small, EdgeFormat::text_tsv));
  GraphIndex b = compute_degrees(EdgeStream(p_large, EdgeFormat::text_tsv));
  REQUIRE(a.num_nodes() == b.num_nodes());
  CHECK(a.footprint_bytes() == b.footprint_bytes());
}

TEST_SUITE_END();
