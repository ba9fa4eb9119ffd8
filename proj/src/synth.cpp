#include "gnnpart/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "gnnpart/store.hpp"

namespace gnnpart {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Weighted pick via cumulative sums; deterministic for a given engine state.
struct WeightedSampler {
  std::vector<double> cumulative;
  std::vector<NodeId> ids;

  void build(const std::vector<NodeId>& members, const std::vector<double>& weight) {
    ids = members;
    cumulative.resize(ids.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      acc += weight[ids[i]];
      cumulative[i] = acc;
    }
  }

  NodeId draw(std::mt19937_64& rng) const {
    double x = uniform01(rng) * cumulative.back();
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), x);
    if (it == cumulative.end()) --it;
    return ids[static_cast<std::size_t>(it - cumulative.begin())];
  }
};

}  // namespace

SynthConfig synth_preset(const std::string& name) {
  SynthConfig cfg;
  cfg.name = name;
  if (name == "cora") {
    cfg.nodes = 2708;
    cfg.edges = 5278;
    cfg.classes = 7;
    cfg.feature_dim = 1433;
    cfg.train_frac = 0.45;
    cfg.val_frac = 0.18;
    cfg.test_frac = 0.37;
    cfg.seed = 7;
  } else if (name == "citeseer") {
    cfg.nodes = 3327;
    cfg.edges = 4614;
    cfg.classes = 6;
    cfg.feature_dim = 3703;
    cfg.train_frac = 0.55;
    cfg.val_frac = 0.15;
    cfg.test_frac = 0.30;
    cfg.seed = 11;
  } else if (name == "pubmed") {
    cfg.nodes = 19717;
    cfg.edges = 44324;
    cfg.classes = 3;
    cfg.feature_dim = 500;
    cfg.train_frac = 0.92;
    cfg.val_frac = 0.03;
    cfg.test_frac = 0.05;
    cfg.seed = 13;
  } else {
    throw ConfigError("unknown synthetic preset: " + name);
  }
  return cfg;
}

SynthDataset synth_graph(const SynthConfig& cfg) {
  if (cfg.nodes < 2 || cfg.classes == 0) throw ConfigError("need >= 2 nodes and >= 1 class");
  if (cfg.mixing < 0 || cfg.mixing > 1) throw ConfigError("mixing must be in [0,1]");
  const std::uint64_t max_edges = cfg.nodes * (cfg.nodes - 1) / 2;
  if (cfg.edges > max_edges) throw ConfigError("more edges requested than pairs exist");

  SynthDataset data;
  const NodeId n = static_cast<NodeId>(cfg.nodes);
  std::mt19937_64 rng(seed_for(cfg.seed, 0x57A7));

  // labels: balanced blocks over a shuffled node order
  data.labels.resize(n);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (NodeId i = 0; i < n; ++i)
    data.labels[order[i]] = static_cast<std::int32_t>(i % cfg.classes);

  // expected-degree weights: heavy head via a shuffled rank
  std::vector<double> weight(n);
  std::vector<NodeId> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::shuffle(rank.begin(), rank.end(), rng);
  for (NodeId i = 0; i < n; ++i)
    weight[rank[i]] = std::pow(static_cast<double>(i) + 10.0, -cfg.degree_skew);

  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0);
  WeightedSampler global;
  global.build(all, weight);
  std::vector<WeightedSampler> by_class(cfg.classes);
  {
    std::vector<std::vector<NodeId>> members(cfg.classes);
    for (NodeId v = 0; v < n; ++v)
      members[static_cast<std::uint32_t>(data.labels[v])].push_back(v);
    for (std::uint32_t c = 0; c < cfg.classes; ++c) by_class[c].build(members[c], weight);
  }

  std::unordered_set<std::uint64_t> used;
  used.reserve(cfg.edges * 2);
  data.edges.reserve(cfg.edges);
  while (data.edges.size() < cfg.edges) {
    NodeId u = global.draw(rng);
    NodeId v;
    if (uniform01(rng) < cfg.mixing)
      v = global.draw(rng);
    else
      v = by_class[static_cast<std::uint32_t>(data.labels[u])].draw(rng);
    if (u == v) continue;
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
    if (!used.insert(key).second) continue;
    data.edges.push_back(Edge{u, v});
  }
  std::shuffle(data.edges.begin(), data.edges.end(), rng);

  // roles from the split fractions, over one more shuffled order
  data.roles.assign(n, NodeRole::none);
  std::shuffle(order.begin(), order.end(), rng);
  std::uint64_t n_train = static_cast<std::uint64_t>(cfg.train_frac * n);
  std::uint64_t n_val = static_cast<std::uint64_t>(cfg.val_frac * n);
  std::uint64_t n_test = static_cast<std::uint64_t>(cfg.test_frac * n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i < n_train)
      data.roles[order[i]] = NodeRole::train;
    else if (i < n_train + n_val)
      data.roles[order[i]] = NodeRole::val;
    else if (i < n_train + n_val + n_test)
      data.roles[order[i]] = NodeRole::test;
  }
  return data;
}

NodeMetaMap to_node_meta(const SynthDataset& data) {
  NodeMetaMap meta;
  meta.reserve(data.labels.size());
  for (std::size_t v = 0; v < data.labels.size(); ++v)
    meta[static_cast<ExtNodeId>(v)] = NodeMeta{data.labels[v], data.roles[v]};
  return meta;
}

std::filesystem::path write_synth_dataset(const SynthDataset& data, const SynthConfig& cfg,
                                          const std::filesystem::path& dir,
                                          EdgeFormat format, bool with_features) {
  std::filesystem::create_directories(dir);
  std::filesystem::path edge_path =
      dir / (format == EdgeFormat::text_tsv ? "edges.tsv" : "edges.bin");
  if (format == EdgeFormat::text_tsv)
    write_text_edges(edge_path, data.edges);
  else
    write_binary_edges(edge_path, data.edges);
  write_node_meta(dir / "nodes.tsv", to_node_meta(data));

  if (with_features) {
    std::mt19937_64 rng(seed_for(cfg.seed, 0xFEA7));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<float>> means(
        cfg.classes, std::vector<float>(cfg.feature_dim));
    for (auto& m : means)
      for (float& x : m) x = static_cast<float>(gauss(rng) * cfg.feature_signal);
    FeatureFileWriter writer(dir / "features.bin", cfg.feature_dim);
    std::vector<float> row(cfg.feature_dim);
    for (std::size_t v = 0; v < data.labels.size(); ++v) {
      const auto& m = means[static_cast<std::uint32_t>(data.labels[v])];
      for (std::uint32_t i = 0; i < cfg.feature_dim; ++i)
        row[i] = m[i] + static_cast<float>(gauss(rng) * cfg.feature_noise);
      writer.write_row(row);
    }
    writer.finish();
  }
  return edge_path;
}

}  // namespace gnnpart
