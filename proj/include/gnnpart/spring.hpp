#pragma once

#include <cstdint>
#include <vector>

#include "gnnpart/edge_stream.hpp"

namespace gnnpart {

// State of the streaming clustering pass. Member sets are implicit: node v
// belongs to root(node_cluster[v]), so the whole structure stays a handful
// of flat O(|V|) arrays and no adjacency is ever held.
struct ClusterState {
  std::vector<std::uint32_t> node_cluster;  // per dense node; kNoCluster until seen
  std::vector<NodeId> richest;              // per dense node; kNoNode until a neighbor is seen
  std::vector<std::uint64_t> volume;        // per cluster id; valid at live roots
  std::vector<std::uint32_t> cluster_size;  // per cluster id; 0 once emptied or absorbed
  std::vector<std::uint32_t> parent;        // union-find over cluster ids
  std::uint64_t num_nodes = 0;              // |V| of the indexed graph
  std::uint64_t num_clustered = 0;          // nodes currently inside clusters

  // Root lookup without path compression; usable on const state.
  std::uint32_t root(std::uint32_t c) const {
    while (parent[c] != c) c = parent[c];
    return c;
  }

  std::uint32_t find(std::uint32_t c) {
    std::uint32_t r = c;
    while (parent[r] != r) r = parent[r];
    while (parent[c] != r) {
      std::uint32_t next = parent[c];
      parent[c] = r;
      c = next;
    }
    return r;
  }

  bool live(std::uint32_t c) const { return parent[c] == c && cluster_size[c] > 0; }

  std::uint32_t cluster_of(NodeId v) const {
    std::uint32_t c = node_cluster[v];
    return c == kNoCluster ? kNoCluster : root(c);
  }

  std::uint64_t live_cluster_count() const;

  std::uint64_t footprint_bytes() const {
    return vec_bytes(node_cluster) + vec_bytes(richest) + vec_bytes(volume) +
           vec_bytes(cluster_size) + vec_bytes(parent);
  }
};

// Per-cluster representative: the member whose richest neighbor has the
// highest degree. kNoNode where every member lacks one.
struct MergePlan {
  std::vector<NodeId> representative;
};

// Disjoint node ownership: every node in exactly one partition.
struct PartitionAssignment {
  std::uint32_t p = 0;
  std::vector<PartId> node_part;            // per dense node
  std::vector<std::uint64_t> owned_count;   // per partition

  std::uint64_t footprint_bytes() const {
    return vec_bytes(node_part) + vec_bytes(owned_count);
  }
};

struct SpringParams {
  std::uint32_t partitions = 4;
  double beta = 1.05;
  std::uint64_t tau_vol = 0;  // 0 = auto: max(1, ceil(2|E|/p))
  std::uint64_t seed = 0;
  bool shuffle_isolated = false;
};

std::uint64_t default_tau_vol(std::uint64_t num_edges, std::uint32_t partitions);

// Streaming node-clustering pass. Every unseen endpoint opens a fresh
// singleton cluster carrying its full degree as volume; when both endpoint
// clusters are within the volume threshold, the node in the lower-volume
// cluster moves to the other one (ties move u into v's cluster). Richest
// neighbors update under strict degree inequality. Self-loops are counted
// but change nothing.
ClusterState cluster_stream(const EdgeStream& stream, const GraphIndex& index,
                            std::uint64_t tau_vol);

MergePlan select_representatives(const ClusterState& state, const GraphIndex& index);

// Cluster-merging pass. Clusters are processed smallest-first; each one tries
// to merge into the cluster of its representative's richest neighbor, subject
// to the |C_i|+|C_t| <= beta*|V|/p size bound. A merged cluster re-enters the
// queue at its new size; a cluster that declines (or whose target is itself)
// retires. Runs until the queue drains.
void merge_clusters(ClusterState& state, MergePlan& plan, const GraphIndex& index,
                    std::uint32_t partitions, double beta);

// Greedy sorted list scheduling: clusters by size descending, each to the
// currently least-occupied partition. Nodes outside any cluster are appended
// one by one to the lightest partition afterwards.
PartitionAssignment assign_partitions(const ClusterState& state, std::uint32_t partitions,
                                      std::uint64_t seed = 0, bool shuffle_isolated = false);

PartitionAssignment spring_partition(const EdgeStream& stream, const GraphIndex& index,
                                     const SpringParams& params);

}  // namespace gnnpart
