#include "gnnpart/completion.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <unordered_set>

namespace gnnpart {

namespace {

// Builds node tables: every owned node appears (even without local edges),
// plus a replica record for any other node touched by the partition's edges.
struct PartitionBuilder {
  explicit PartitionBuilder(std::uint32_t p, const GraphIndex& index)
      : index_(index), seen(p), edges(p) {}

  void add_edge(PartId s, const Edge& e, NodeId du, NodeId dv) {
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(du, dv)) << 32) |
                        std::max(du, dv);
    if (!seen[s].insert(key).second) return;  // one record per edge per partition
    edges[s].push_back(e);
  }

  PartitionedGraph finish(const HomeMap& homes, const NodeMetaMap& meta) {
    PartitionedGraph g;
    g.p = static_cast<std::uint32_t>(edges.size());
    g.num_nodes = index_.num_nodes();
    g.num_edges = index_.num_edges;
    g.parts.resize(g.p);
    std::vector<std::vector<bool>> present(g.p,
                                           std::vector<bool>(index_.num_nodes(), false));
    for (PartId s = 0; s < g.p; ++s)
      for (const Edge& e : edges[s]) {
        present[s][index_.dense(e.u)] = true;
        present[s][index_.dense(e.v)] = true;
      }
    for (NodeId v = 0; v < index_.num_nodes(); ++v) present[homes.home[v]][v] = true;

    for (PartId s = 0; s < g.p; ++s) {
      GraphPartition& part = g.parts[s];
      part.edges = std::move(edges[s]);
      for (NodeId v = 0; v < index_.num_nodes(); ++v) {
        if (!present[s][v]) continue;
        ExtNodeId ext = index_.dense_to_ext[v];
        bool owner = homes.home[v] == s;
        NodeRole role = NodeRole::none;
        if (owner) {
          auto it = meta.find(ext);
          if (it != meta.end()) role = it->second.role;
        }
        part.nodes.push_back(NodeRecord{ext, owner, role});
      }
      std::sort(part.nodes.begin(), part.nodes.end(),
                [](const NodeRecord& a, const NodeRecord& b) { return a.node < b.node; });
    }
    return g;
  }

  const GraphIndex& index_;
  std::vector<std::unordered_set<std::uint64_t>> seen;
  std::vector<std::vector<Edge>> edges;
};

void check_homes(const HomeMap& homes, const GraphIndex& index) {
  if (homes.home.size() != index.num_nodes() || homes.p == 0)
    throw DataError("home map does not cover the node set");
  for (PartId s : homes.home)
    if (s >= homes.p) throw DataError("home partition out of range");
}

}  // namespace

NodeRole parse_role(const std::string& name) {
  if (name == "train") return NodeRole::train;
  if (name == "val") return NodeRole::val;
  if (name == "test") return NodeRole::test;
  if (name == "none" || name.empty()) return NodeRole::none;
  throw DataError("unknown node role: " + name);
}

const char* role_name(NodeRole role) {
  switch (role) {
    case NodeRole::train: return "train";
    case NodeRole::val: return "val";
    case NodeRole::test: return "test";
    default: return "none";
  }
}

HomeMap resolve_homes(const PartitionAssignment& assignment) {
  return HomeMap{assignment.p, assignment.node_part};
}

HomeMap resolve_homes(const ReplicaAssignment& assignment, std::uint64_t num_nodes,
                      std::uint64_t seed) {
  if (assignment.replica_mask.size() != num_nodes)
    throw DataError("replica assignment does not cover the node set");
  HomeMap homes{assignment.p, std::vector<PartId>(num_nodes, 0)};
  std::vector<std::uint64_t> owned(assignment.p, 0);
  std::vector<NodeId> orphans;
  std::mt19937_64 rng(seed_for(seed, 0x401E5));
  for (NodeId v = 0; v < num_nodes; ++v) {
    std::uint64_t mask = assignment.replica_mask[v];
    int count = std::popcount(mask);
    if (count == 0) {
      orphans.push_back(v);
      continue;
    }
    std::uint64_t pick = rng() % static_cast<std::uint64_t>(count);
    for (std::uint64_t m = mask;; m &= m - 1) {
      if (pick == 0) {
        homes.home[v] = static_cast<PartId>(std::countr_zero(m));
        break;
      }
      --pick;
    }
    owned[homes.home[v]]++;
  }
  for (NodeId v : orphans) {
    PartId best = 0;
    for (PartId s = 1; s < assignment.p; ++s)
      if (owned[s] < owned[best]) best = s;
    homes.home[v] = best;
    owned[best]++;
  }
  return homes;
}

PartitionedGraph complete_edges(const EdgeStream& stream, const GraphIndex& index,
                                const HomeMap& homes, const NodeMetaMap& meta,
                                std::uint32_t hops) {
  if (hops < 1 || hops > 3) throw ConfigError("hop count must be in {1,2,3}");
  check_homes(homes, index);
  const std::uint32_t p = homes.p;

  PartitionBuilder builder(p, index);
  if (hops == 1) {
    stream.for_each([&](const Edge& e) {
      NodeId u = index.dense(e.u);
      NodeId v = index.dense(e.v);
      builder.add_edge(homes.home[u], e, u, v);
      if (homes.home[v] != homes.home[u]) builder.add_edge(homes.home[v], e, u, v);
    });
    return builder.finish(homes, meta);
  }

  if (p > kMaxReplicaPartitions)
    throw ConfigError("multi-hop completion supports at most 64 partitions");
  // reach[v] bit s: v lies within hops-1 steps of a node owned by partition s
  std::vector<std::uint64_t> reach(index.num_nodes(), 0);
  for (NodeId v = 0; v < index.num_nodes(); ++v)
    reach[v] = std::uint64_t{1} << homes.home[v];
  for (std::uint32_t round = 1; round < hops; ++round) {
    std::vector<std::uint64_t> next = reach;
    stream.for_each([&](const Edge& e) {
      NodeId u = index.dense(e.u);
      NodeId v = index.dense(e.v);
      next[u] |= reach[v];
      next[v] |= reach[u];
    });
    reach = std::move(next);
  }
  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    for (std::uint64_t m = reach[u] | reach[v]; m != 0; m &= m - 1)
      builder.add_edge(static_cast<PartId>(std::countr_zero(m)), e, u, v);
  });
  return builder.finish(homes, meta);
}

PartitionedGraph random_edge_assign(const EdgeStream& stream, const GraphIndex& index,
                                    const HomeMap& homes, const NodeMetaMap& meta,
                                    std::uint64_t seed) {
  check_homes(homes, index);
  PartitionBuilder builder(homes.p, index);
  std::mt19937_64 rng(seed_for(seed, 0xED6E));
  stream.for_each([&](const Edge& e) {
    NodeId u = index.dense(e.u);
    NodeId v = index.dense(e.v);
    PartId s = homes.home[u];
    if (homes.home[v] != s && (rng() & 1)) s = homes.home[v];
    builder.add_edge(s, e, u, v);
  });
  return builder.finish(homes, meta);
}

}  // namespace gnnpart
