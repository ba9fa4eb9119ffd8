#include "gnnpart/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gnnpart {

double replication_factor(const PartitionedGraph& g) {
  if (g.num_nodes == 0) throw DataError("replication factor undefined for an empty graph");
  return static_cast<double>(g.total_node_records()) / static_cast<double>(g.num_nodes);
}

PartitionReport balance_stats(const PartitionedGraph& g) {
  PartitionReport rep;
  rep.p = g.p;
  rep.num_nodes = g.num_nodes;
  rep.num_edges = g.num_edges;
  rep.replication_factor = replication_factor(g);
  std::uint64_t max_owned = 0, max_edges = 0, sum_owned = 0, sum_edges = 0;
  for (const GraphPartition& part : g.parts) {
    PartitionReport::Part row;
    row.owned = part.owned_count();
    row.total = part.nodes.size();
    row.edges = part.edges.size();
    max_owned = std::max(max_owned, row.owned);
    max_edges = std::max(max_edges, row.edges);
    sum_owned += row.owned;
    sum_edges += row.edges;
    rep.parts.push_back(row);
  }
  double mean_owned = static_cast<double>(sum_owned) / g.p;
  double mean_edges = static_cast<double>(sum_edges) / g.p;
  rep.owned_max_over_mean = mean_owned > 0 ? max_owned / mean_owned : 1.0;
  rep.edges_max_over_mean = mean_edges > 0 ? max_edges / mean_edges : 1.0;
  return rep;
}

ClusterStats cluster_stats(const ClusterState& state) {
  ClusterStats stats;
  std::uint64_t total = 0;
  std::vector<std::uint64_t> sizes;
  for (std::uint32_t c = 0; c < state.parent.size(); ++c) {
    if (!state.live(c)) continue;
    sizes.push_back(state.cluster_size[c]);
    total += state.cluster_size[c];
  }
  stats.count = sizes.size();
  if (stats.count == 0) return stats;
  stats.mean_size = static_cast<double>(total) / static_cast<double>(stats.count);
  double var = 0.0;
  for (std::uint64_t s : sizes) {
    double d = static_cast<double>(s) - stats.mean_size;
    var += d * d;
  }
  stats.std_size = std::sqrt(var / static_cast<double>(stats.count));
  return stats;
}

nlohmann::json PartitionReport::to_json() const {
  nlohmann::json j;
  j["schema"] = schema;
  j["algorithm"] = algorithm;
  j["num_partitions"] = p;
  j["num_nodes"] = num_nodes;
  j["num_edges"] = num_edges;
  j["replication_factor"] = replication_factor;
  j["owned_max_over_mean"] = owned_max_over_mean;
  j["edges_max_over_mean"] = edges_max_over_mean;
  nlohmann::json rows = nlohmann::json::array();
  for (const Part& part : parts) {
    rows.push_back({{"owned", part.owned}, {"total", part.total}, {"edges", part.edges}});
  }
  j["partitions"] = rows;
  if (clusters) {
    j["clusters"] = {{"count", clusters->count},
                     {"mean_size", clusters->mean_size},
                     {"std_size", clusters->std_size}};
  }
  return j;
}

PartitionReport PartitionReport::from_json(const nlohmann::json& j) {
  PartitionReport rep;
  rep.schema = j.at("schema").get<int>();
  if (rep.schema != 1) throw DataError("unsupported report schema");
  rep.algorithm = j.at("algorithm").get<std::string>();
  rep.p = j.at("num_partitions").get<std::uint32_t>();
  rep.num_nodes = j.at("num_nodes").get<std::uint64_t>();
  rep.num_edges = j.at("num_edges").get<std::uint64_t>();
  rep.replication_factor = j.at("replication_factor").get<double>();
  rep.owned_max_over_mean = j.at("owned_max_over_mean").get<double>();
  rep.edges_max_over_mean = j.at("edges_max_over_mean").get<double>();
  for (const auto& row : j.at("partitions")) {
    rep.parts.push_back(Part{row.at("owned").get<std::uint64_t>(),
                             row.at("total").get<std::uint64_t>(),
                             row.at("edges").get<std::uint64_t>()});
  }
  if (j.contains("clusters")) {
    ClusterStats cs;
    cs.count = j["clusters"].at("count").get<std::uint64_t>();
    cs.mean_size = j["clusters"].at("mean_size").get<double>();
    cs.std_size = j["clusters"].at("std_size").get<double>();
    rep.clusters = cs;
  }
  return rep;
}

std::string PartitionReport::to_table() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "algorithm: %s   partitions: %u   |V|: %llu   |E|: %llu\n",
                algorithm.c_str(), p, static_cast<unsigned long long>(num_nodes),
                static_cast<unsigned long long>(num_edges));
  out += line;
  std::snprintf(line, sizeof(line),
                "replication factor: %.4f   owned max/mean: %.4f   edge max/mean: %.4f\n",
                replication_factor, owned_max_over_mean, edges_max_over_mean);
  out += line;
  if (clusters) {
    std::snprintf(line, sizeof(line), "clusters: %llu   size %.1f +/- %.1f\n",
                  static_cast<unsigned long long>(clusters->count), clusters->mean_size,
                  clusters->std_size);
    out += line;
  }
  std::snprintf(line, sizeof(line), "%6s %12s %12s %12s\n", "part", "owned", "total", "edges");
  out += line;
  for (std::size_t s = 0; s < parts.size(); ++s) {
    std::snprintf(line, sizeof(line), "%6zu %12llu %12llu %12llu\n", s,
                  static_cast<unsigned long long>(parts[s].owned),
                  static_cast<unsigned long long>(parts[s].total),
                  static_cast<unsigned long long>(parts[s].edges));
    out += line;
  }
  return out;
}

}  // namespace gnnpart
