#include "gnnpart/spring.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace gnnpart {

std::uint64_t ClusterState::live_cluster_count() const {
  std::uint64_t n = 0;
  for (std::uint32_t c = 0; c < parent.size(); ++c)
    if (live(c)) ++n;
  return n;
}

std::uint64_t default_tau_vol(std::uint64_t num_edges, std::uint32_t partitions) {
  if (partitions == 0) throw ConfigError("partition count must be >= 1");
  std::uint64_t tau = (2 * num_edges + partitions - 1) / partitions;
  return std::max<std::uint64_t>(1, tau);
}

ClusterState cluster_stream(const EdgeStream& stream, const GraphIndex& index,
                            std::uint64_t tau_vol) {
  if (tau_vol == 0) throw ConfigError("tau_vol must be >= 1");
  const NodeId n = index.num_nodes();
  ClusterState st;
  st.num_nodes = n;
  st.node_cluster.assign(n, kNoCluster);
  st.richest.assign(n, kNoNode);
  st.volume.reserve(n);
  st.cluster_size.reserve(n);
  st.parent.reserve(n);

  auto fresh_cluster = [&st](NodeId v, std::uint32_t deg) {
    std::uint32_t c = static_cast<std::uint32_t>(st.parent.size());
    st.parent.push_back(c);
    st.volume.push_back(deg);
    st.cluster_size.push_back(1);
    st.node_cluster[v] = c;
    st.num_clustered++;
    return c;
  };

  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    if (u == v) return;  // counted by the stream, otherwise inert
    const std::uint32_t du = index.degree[u];
    const std::uint32_t dv = index.degree[v];
    std::uint32_t cu = st.node_cluster[u];
    std::uint32_t cv = st.node_cluster[v];
    if (cu == kNoCluster) cu = fresh_cluster(u, du);
    if (cv == kNoCluster) cv = fresh_cluster(v, dv);
    if (cu != cv && st.volume[cu] <= tau_vol && st.volume[cv] <= tau_vol) {
      if (st.volume[cu] <= st.volume[cv]) {
        st.volume[cu] -= du;
        st.cluster_size[cu] -= 1;
        st.volume[cv] += du;
        st.cluster_size[cv] += 1;
        st.node_cluster[u] = cv;
      } else {
        st.volume[cv] -= dv;
        st.cluster_size[cv] -= 1;
        st.volume[cu] += dv;
        st.cluster_size[cu] += 1;
        st.node_cluster[v] = cu;
      }
    }
    NodeId ru = st.richest[u];
    if (ru == kNoNode || index.degree[ru] < dv) st.richest[u] = v;
    NodeId rv = st.richest[v];
    if (rv == kNoNode || index.degree[rv] < du) st.richest[v] = u;
  });
  return st;
}

MergePlan select_representatives(const ClusterState& state, const GraphIndex& index) {
  MergePlan plan;
  plan.representative.assign(state.parent.size(), kNoNode);
  for (NodeId v = 0; v < state.node_cluster.size(); ++v) {
    std::uint32_t c = state.node_cluster[v];
    if (c == kNoCluster || state.richest[v] == kNoNode) continue;
    NodeId r = plan.representative[c];
    // first maximal member wins: replace only under strict inequality
    if (r == kNoNode || index.degree[state.richest[r]] < index.degree[state.richest[v]])
      plan.representative[c] = v;
  }
  return plan;
}

void merge_clusters(ClusterState& state, MergePlan& plan, const GraphIndex& index,
                    std::uint32_t partitions, double beta) {
  if (partitions == 0) throw ConfigError("partition count must be >= 1");
  if (beta < 1.0) throw ConfigError("balance factor must be >= 1");
  const double bound = beta * static_cast<double>(state.num_nodes) / partitions;

  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (size, cluster)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  std::vector<bool> retired(state.parent.size(), false);
  for (std::uint32_t c = 0; c < state.parent.size(); ++c)
    if (state.live(c)) queue.emplace(state.cluster_size[c], c);

  auto rep_degree = [&](std::uint32_t c) -> std::uint32_t {
    NodeId r = plan.representative[c];
    return r == kNoNode ? 0 : index.degree[state.richest[r]];
  };

  while (!queue.empty()) {
    auto [size, c] = queue.top();
    queue.pop();
    if (!state.live(c) || retired[c] || state.cluster_size[c] != size) continue;  // stale
    NodeId rep = plan.representative[c];
    if (rep == kNoNode) {
      retired[c] = true;
      continue;
    }
    std::uint32_t target = state.find(state.node_cluster[state.richest[rep]]);
    if (target == c) {
      retired[c] = true;
      continue;
    }
    if (static_cast<double>(state.cluster_size[c]) + state.cluster_size[target] <= bound) {
      // target survives the merge
      state.parent[c] = target;
      state.cluster_size[target] += state.cluster_size[c];
      state.volume[target] += state.volume[c];
      state.cluster_size[c] = 0;
      state.volume[c] = 0;
      if (rep_degree(target) < rep_degree(c)) plan.representative[target] = rep;
      retired[target] = false;
      queue.emplace(state.cluster_size[target], target);
    } else {
      retired[c] = true;
    }
  }
}

PartitionAssignment assign_partitions(const ClusterState& state, std::uint32_t partitions,
                                      std::uint64_t seed, bool shuffle_isolated) {
  if (partitions == 0) throw ConfigError("partition count must be >= 1");
  PartitionAssignment out;
  out.p = partitions;
  out.node_part.assign(state.node_cluster.size(), 0);
  out.owned_count.assign(partitions, 0);

  std::vector<std::uint32_t> clusters;
  for (std::uint32_t c = 0; c < state.parent.size(); ++c)
    if (state.live(c)) clusters.push_back(c);
  std::sort(clusters.begin(), clusters.end(), [&state](std::uint32_t a, std::uint32_t b) {
    if (state.cluster_size[a] != state.cluster_size[b])
      return state.cluster_size[a] > state.cluster_size[b];
    return a < b;
  });

  using Load = std::pair<std::uint64_t, PartId>;
  std::priority_queue<Load, std::vector<Load>, std::greater<>> loads;
  for (PartId s = 0; s < partitions; ++s) loads.emplace(0, s);

  std::vector<PartId> cluster_part(state.parent.size(), 0);
  for (std::uint32_t c : clusters) {
    auto [load, s] = loads.top();
    loads.pop();
    cluster_part[c] = s;
    loads.emplace(load + state.cluster_size[c], s);
  }

  std::vector<NodeId> leftovers;
  for (NodeId v = 0; v < state.node_cluster.size(); ++v) {
    std::uint32_t c = state.node_cluster[v];
    if (c == kNoCluster) {
      leftovers.push_back(v);
    } else {
      PartId s = cluster_part[state.root(c)];
      out.node_part[v] = s;
      out.owned_count[s]++;
    }
  }
  if (shuffle_isolated && leftovers.size() > 1) {
    std::mt19937_64 rng(seed_for(seed, 0xA551));
    std::shuffle(leftovers.begin(), leftovers.end(), rng);
  }
  for (NodeId v : leftovers) {
    auto [load, s] = loads.top();
    loads.pop();
    out.node_part[v] = s;
    out.owned_count[s]++;
    loads.emplace(load + 1, s);
  }
  return out;
}

PartitionAssignment spring_partition(const EdgeStream& stream, const GraphIndex& index,
                                     const SpringParams& params) {
  std::uint64_t tau = params.tau_vol != 0
                          ? params.tau_vol
                          : default_tau_vol(index.num_edges, params.partitions);
  ClusterState state = cluster_stream(stream, index, tau);
  MergePlan plan = select_representatives(state, index);
  merge_clusters(state, plan, index, params.partitions, params.beta);
  return assign_partitions(state, params.partitions, params.seed, params.shuffle_isolated);
}

}  // namespace gnnpart
