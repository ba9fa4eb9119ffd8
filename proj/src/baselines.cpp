#include "gnnpart/baselines.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>

#include "gnnpart/spring.hpp"

namespace gnnpart {

namespace {

std::uint64_t bit(PartId s) { return std::uint64_t{1} << s; }

ReplicaAssignment make_assignment(std::uint32_t partitions, const GraphIndex& index) {
  if (partitions == 0) throw ConfigError("partition count must be >= 1");
  if (partitions > kMaxReplicaPartitions)
    throw ConfigError("replica-tracking partitioners support at most 64 partitions");
  ReplicaAssignment out;
  out.p = partitions;
  out.replica_mask.assign(index.num_nodes(), 0);
  out.edge_part.reserve(index.num_edges);
  out.part_edges.assign(partitions, 0);
  return out;
}

void place(ReplicaAssignment& out, NodeId u, NodeId v, PartId s) {
  out.replica_mask[u] |= bit(s);
  out.replica_mask[v] |= bit(s);
  out.edge_part.push_back(s);
  out.part_edges[s]++;
}

PartId least_loaded(const std::vector<std::uint64_t>& loads) {
  PartId best = 0;
  for (PartId s = 1; s < loads.size(); ++s)
    if (loads[s] < loads[best]) best = s;
  return best;
}

PartId least_loaded_in_mask(const std::vector<std::uint64_t>& loads, std::uint64_t mask) {
  PartId best = kNoNode;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    PartId s = static_cast<PartId>(std::countr_zero(m));
    if (best == kNoNode || loads[s] < loads[best]) best = s;
  }
  return best;
}

}  // namespace

double ReplicaAssignment::pre_completion_rf() const {
  std::uint64_t replicas = 0;
  std::uint64_t touched = 0;
  for (std::uint64_t mask : replica_mask) {
    if (mask == 0) continue;
    replicas += std::popcount(mask);
    touched++;
  }
  return touched == 0 ? 1.0 : static_cast<double>(replicas) / static_cast<double>(touched);
}

ReplicaAssignment dbh_partition(const EdgeStream& stream, const GraphIndex& index,
                                std::uint32_t partitions, const PlacementHash& hash) {
  ReplicaAssignment out = make_assignment(partitions, index);
  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    ExtNodeId key;
    if (index.degree[u] != index.degree[v])
      key = index.degree[u] < index.degree[v] ? e.u : e.v;
    else
      key = std::min(e.u, e.v);
    PartId s = static_cast<PartId>(hash(key) % partitions);
    place(out, u, v, s);
  });
  return out;
}

ReplicaAssignment greedy_partition(const EdgeStream& stream, const GraphIndex& index,
                                   std::uint32_t partitions, double balance_slack) {
  ReplicaAssignment out = make_assignment(partitions, index);
  std::uint64_t assigned = 0;
  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    if (balance_slack > 0.0)
      cap = static_cast<std::uint64_t>(balance_slack *
                                       (static_cast<double>(assigned) / partitions + 1.0));
    auto usable = [&](std::uint64_t mask) {
      std::uint64_t ok = 0;
      for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        PartId s = static_cast<PartId>(std::countr_zero(m));
        if (out.part_edges[s] < cap) ok |= bit(s);
      }
      return ok;
    };
    PartId s;
    std::uint64_t both = usable(out.replica_mask[u] & out.replica_mask[v]);
    std::uint64_t either = usable(out.replica_mask[u] | out.replica_mask[v]);
    if (both != 0)
      s = least_loaded_in_mask(out.part_edges, both);
    else if (either != 0)
      s = least_loaded_in_mask(out.part_edges, either);
    else
      s = least_loaded(out.part_edges);
    place(out, u, v, s);
    assigned++;
  });
  return out;
}

ReplicaAssignment hdrf_partition(const EdgeStream& stream, const GraphIndex& index,
                                 std::uint32_t partitions, double lambda) {
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  constexpr double kEps = 1.0;
  ReplicaAssignment out = make_assignment(partitions, index);
  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    const double du = index.degree[u];
    const double dv = index.degree[v];
    const double theta_u = du / (du + dv);
    const double theta_v = 1.0 - theta_u;
    std::uint64_t maxload = 0;
    std::uint64_t minload = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t l : out.part_edges) {
      maxload = std::max(maxload, l);
      minload = std::min(minload, l);
    }
    PartId best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (PartId s = 0; s < partitions; ++s) {
      double rep = 0.0;
      if (out.replica_mask[u] & bit(s)) rep += 1.0 + (1.0 - theta_u);
      if (out.replica_mask[v] & bit(s)) rep += 1.0 + (1.0 - theta_v);
      double bal = lambda * static_cast<double>(maxload - out.part_edges[s]) /
                   (kEps + static_cast<double>(maxload - minload));
      double score = rep + bal;
      if (score > best_score) {
        best_score = score;
        best = s;
      }
    }
    place(out, u, v, best);
  });
  return out;
}

ReplicaAssignment two_phase_partition(const EdgeStream& stream, const GraphIndex& index,
                                      std::uint32_t partitions, std::uint64_t tau_vol) {
  if (tau_vol == 0) tau_vol = default_tau_vol(index.num_edges, partitions);
  ClusterState st = cluster_stream(stream, index, tau_vol);

  std::vector<std::uint32_t> clusters;
  for (std::uint32_t c = 0; c < st.parent.size(); ++c)
    if (st.live(c)) clusters.push_back(c);
  std::sort(clusters.begin(), clusters.end(), [&st](std::uint32_t a, std::uint32_t b) {
    if (st.volume[a] != st.volume[b]) return st.volume[a] > st.volume[b];
    return a < b;
  });

  ReplicaAssignment out = make_assignment(partitions, index);
  std::vector<std::uint64_t> vol_load(partitions, 0);
  std::vector<PartId> cluster_part(st.parent.size(), 0);
  for (std::uint32_t c : clusters) {
    PartId s = least_loaded(vol_load);
    cluster_part[c] = s;
    vol_load[s] += st.volume[c];
  }
  std::vector<PartId> node_part(index.num_nodes(), 0);
  std::vector<std::uint64_t> cluster_vol(index.num_nodes(), 0);
  for (NodeId v = 0; v < index.num_nodes(); ++v) {
    std::uint32_t c = st.node_cluster[v];
    if (c == kNoCluster) {
      node_part[v] = static_cast<PartId>(v % partitions);  // self-loop-only nodes
    } else {
      std::uint32_t r = st.root(c);
      node_part[v] = cluster_part[r];
      cluster_vol[v] = st.volume[r];
    }
  }

  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    PartId s = cluster_vol[u] >= cluster_vol[v] ? node_part[u] : node_part[v];
    place(out, u, v, s);
  });
  return out;
}

}  // namespace gnnpart
