#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include "gnnpart/edge_stream.hpp"

namespace gnnpart {

// Replica sets are partition bitmasks, which caps these partitioners at 64
// partitions. Plenty for the target deployments.
inline constexpr std::uint32_t kMaxReplicaPartitions = 64;

using PlacementHash = std::function<std::uint64_t(std::uint64_t)>;

// Vertex-cut output: each edge lands in exactly one partition and a node is
// replicated wherever its incident edges went.
struct ReplicaAssignment {
  std::uint32_t p = 0;
  std::vector<std::uint64_t> replica_mask;  // per dense node
  std::vector<PartId> edge_part;            // per streamed edge, stream order
  std::vector<std::uint64_t> part_edges;    // edges per partition

  std::uint32_t replica_count(NodeId v) const {
    return static_cast<std::uint32_t>(std::popcount(replica_mask[v]));
  }

  // Average replicas per node that carries at least one edge. >= 1, with
  // equality exactly when no node spans partitions.
  double pre_completion_rf() const;
};

// Hash the lower-degree endpoint of each edge (ties: lower external id).
ReplicaAssignment dbh_partition(const EdgeStream& stream, const GraphIndex& index,
                                std::uint32_t partitions, const PlacementHash& hash = mix64);

// Placement rules, in order: a partition already holding both endpoints,
// else one holding either endpoint, else anywhere; least edge-loaded wins
// each round, ties to the lowest index. balance_slack > 0 additionally bars
// case-1/2 candidates whose load exceeds slack * (assigned/p + 1).
ReplicaAssignment greedy_partition(const EdgeStream& stream, const GraphIndex& index,
                                   std::uint32_t partitions, double balance_slack = 0.0);

// Score-based placement: reuse of an endpoint's replicas is rewarded with
// 1 + (1 - theta), theta being that endpoint's share of the edge's degree
// sum, so the low-degree endpoint pulls harder; a lambda-weighted balance
// term (max-load distance over spread, epsilon 1) breaks the rest.
ReplicaAssignment hdrf_partition(const EdgeStream& stream, const GraphIndex& index,
                                 std::uint32_t partitions, double lambda = 1.1);

// Two-phase clustering baseline: phase one runs the plain streaming
// clustering (no merging), clusters go to the least volume-loaded partition
// in descending volume order; phase two re-streams and sends each edge to
// the partition of its larger-volume-cluster endpoint (ties: u's side).
ReplicaAssignment two_phase_partition(const EdgeStream& stream, const GraphIndex& index,
                                      std::uint32_t partitions, std::uint64_t tau_vol = 0);

}  // namespace gnnpart
