#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnnpart/completion.hpp"
#include "gnnpart/spring.hpp"

namespace gnnpart {

struct ClusterStats {
  std::uint64_t count = 0;
  double mean_size = 0.0;
  double std_size = 0.0;  // population standard deviation
};

struct PartitionReport {
  int schema = 1;
  std::string algorithm;
  std::uint32_t p = 0;
  std::uint64_t num_nodes = 0;
  std::uint64_t num_edges = 0;
  double replication_factor = 1.0;
  struct Part {
    std::uint64_t owned = 0;
    std::uint64_t total = 0;
    std::uint64_t edges = 0;
  };
  std::vector<Part> parts;
  double owned_max_over_mean = 1.0;
  double edges_max_over_mean = 1.0;
  std::optional<ClusterStats> clusters;

  nlohmann::json to_json() const;
  static PartitionReport from_json(const nlohmann::json& j);
  std::string to_table() const;
};

// (sum of per-partition node records) / |V|, owners and replicas both counted.
double replication_factor(const PartitionedGraph& g);

PartitionReport balance_stats(const PartitionedGraph& g);

// Statistics over live clusters. Nodes without any proper (non-loop) edge
// never enter a cluster, so isolated-node singletons are excluded by
// construction.
ClusterStats cluster_stats(const ClusterState& state);

}  // namespace gnnpart
