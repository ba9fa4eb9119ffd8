// Brute-force oracles for the test suites. Everything here recomputes
// results from first principles (raw edge vectors, plain file reads) and
// stays off the library's code paths wherever a check targets them.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gnnpart/edge_stream.hpp"

namespace oracle {

struct RawEdge {
  std::uint64_t u, v;
};

// adjacency sets keyed by node id, self-loops excluded
inline std::map<std::uint64_t, std::set<std::uint64_t>> adjacency(
    const std::vector<RawEdge>& edges) {
  std::map<std::uint64_t, std::set<std::uint64_t>> adj;
  for (const RawEdge& e : edges) {
    if (e.u == e.v) continue;
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  return adj;
}

// degree counting multiplicity (duplicates count, self-loops count twice)
inline std::map<std::uint64_t, std::uint64_t> degrees(const std::vector<RawEdge>& edges) {
  std::map<std::uint64_t, std::uint64_t> deg;
  for (const RawEdge& e : edges) {
    if (e.u == e.v) {
      deg[e.u] += 2;
    } else {
      deg[e.u] += 1;
      deg[e.v] += 1;
    }
  }
  return deg;
}

// node appearances recounted from the partition files themselves: a node is
// in partition i if it appears in part-i's node table.
inline double rf_recount_from_files(const std::filesystem::path& dir,
                                    std::uint32_t partitions, std::uint64_t num_nodes) {
  std::uint64_t appearances = 0;
  for (std::uint32_t s = 0; s < partitions; ++s) {
    std::ifstream nodes(dir / ("part-" + std::to_string(s)) / "nodes.tsv");
    std::string line;
    while (std::getline(nodes, line))
      if (!line.empty()) ++appearances;
  }
  return static_cast<double>(appearances) / static_cast<double>(num_nodes);
}

// replica sets recounted from per-edge placements
inline std::map<std::uint64_t, std::set<std::uint32_t>> replica_recount(
    const std::vector<RawEdge>& edges, const std::vector<std::uint32_t>& edge_part) {
  std::map<std::uint64_t, std::set<std::uint32_t>> replicas;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    replicas[edges[i].u].insert(edge_part[i]);
    replicas[edges[i].v].insert(edge_part[i]);
  }
  return replicas;
}

// seeded random simple graph: n nodes, up to m distinct non-loop edges
inline std::vector<RawEdge> random_graph(std::uint64_t n, std::uint64_t m,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<std::pair<std::uint64_t, std::uint64_t>> used;
  std::vector<RawEdge> edges;
  std::uint64_t attempts = 0;
  while (edges.size() < m && attempts < m * 20) {
    ++attempts;
    std::uint64_t u = rng() % n;
    std::uint64_t v = rng() % n;
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (!used.insert(key).second) continue;
    edges.push_back(RawEdge{u, v});
  }
  return edges;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("gnnpart_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

inline std::filesystem::path write_tsv(const std::filesystem::path& path,
                                       const std::vector<RawEdge>& edges) {
  std::ofstream out(path);
  for (const RawEdge& e : edges) out << e.u << '\t' << e.v << '\n';
  return path;
}

inline std::vector<gnnpart::Edge> to_edges(const std::vector<RawEdge>& edges) {
  std::vector<gnnpart::Edge> out;
  out.reserve(edges.size());
  for (const RawEdge& e : edges) out.push_back(gnnpart::Edge{e.u, e.v});
  return out;
}

}  // namespace oracle
