#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gnnpart/baselines.hpp"
#include "gnnpart/spring.hpp"

namespace gnnpart {

enum class NodeRole : std::uint8_t { none = 0, train = 1, val = 2, test = 3 };

NodeRole parse_role(const std::string& name);
const char* role_name(NodeRole role);

struct NodeMeta {
  std::int32_t label = -1;
  NodeRole role = NodeRole::none;
};
using NodeMetaMap = std::unordered_map<ExtNodeId, NodeMeta>;

struct NodeRecord {
  ExtNodeId node;
  bool owner;
  NodeRole role;  // roles attach to owner records only; replicas carry none
  bool operator==(const NodeRecord&) const = default;
};

struct GraphPartition {
  std::vector<Edge> edges;        // external ids, deduplicated, stream order
  std::vector<NodeRecord> nodes;  // ascending external id
  std::uint64_t owned_count() const {
    std::uint64_t n = 0;
    for (const auto& rec : nodes) n += rec.owner ? 1 : 0;
    return n;
  }
};

// Materialized partitions after an edge-placement pass: each node owns one
// home partition and shows up as a replica wherever completion copied it.
struct PartitionedGraph {
  std::uint32_t p = 0;
  std::uint64_t num_nodes = 0;  // |V| of the source graph
  std::uint64_t num_edges = 0;  // records in the source stream
  std::vector<GraphPartition> parts;

  std::uint64_t total_node_records() const {
    std::uint64_t n = 0;
    for (const auto& part : parts) n += part.nodes.size();
    return n;
  }
};

// Home partition per dense node. Carries p so empty partitions survive.
struct HomeMap {
  std::uint32_t p = 0;
  std::vector<PartId> home;
};

// Disjoint assignments already are home maps.
HomeMap resolve_homes(const PartitionAssignment& assignment);

// Vertex-cut output: pick one replica per node uniformly at random (seeded);
// nodes with no incident edge go to the least-owned partition afterwards.
HomeMap resolve_homes(const ReplicaAssignment& assignment, std::uint64_t num_nodes,
                      std::uint64_t seed);

// Second streaming pass. hops=1 copies each edge into both endpoints' home
// partitions, so every owned node keeps its full neighbor list locally.
// hops>1 first grows per-partition frontier bitmaps (hops-1 extra passes,
// O(|V|) bits per partition) and then copies each edge into every partition
// whose frontier reaches an endpoint; that closes the k-hop neighborhood
// around owned nodes without chasing replicas of replicas.
PartitionedGraph complete_edges(const EdgeStream& stream, const GraphIndex& index,
                                const HomeMap& homes, const NodeMetaMap& meta,
                                std::uint32_t hops = 1);

// Ablation path: a cross-partition edge goes to exactly one of the two home
// partitions, chosen uniformly (seeded). Neighborhoods are left incomplete.
PartitionedGraph random_edge_assign(const EdgeStream& stream, const GraphIndex& index,
                                    const HomeMap& homes, const NodeMetaMap& meta,
                                    std::uint64_t seed);

}  // namespace gnnpart
