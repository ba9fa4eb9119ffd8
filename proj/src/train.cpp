#include "gnnpart/train.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <random>
#include <unordered_map>

namespace gnnpart {

namespace {

Eigen::MatrixXd logits(const Eigen::MatrixXd& weight, const Eigen::VectorXd& bias,
                       const Eigen::MatrixXd& x) {
  return (x * weight).rowwise() + bias.transpose();
}

// Row-wise softmax with the usual max-shift.
Eigen::MatrixXd softmax_rows(Eigen::MatrixXd z) {
  Eigen::VectorXd rowmax = z.rowwise().maxCoeff();
  z.colwise() -= rowmax;
  Eigen::MatrixXd e = z.array().exp().matrix();
  Eigen::VectorXd sums = e.rowwise().sum();
  e.array().colwise() /= sums.array();
  return e;
}

}  // namespace

LocalAdjacency build_adjacency(
    std::uint32_t rows, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  LocalAdjacency adj;
  adj.offsets.assign(rows + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= rows || v >= rows) throw DataError("edge endpoint outside the row space");
    adj.offsets[u + 1]++;
    if (u != v) adj.offsets[v + 1]++;
  }
  for (std::uint32_t i = 0; i < rows; ++i) adj.offsets[i + 1] += adj.offsets[i];
  adj.neighbors.resize(adj.offsets[rows]);
  std::vector<std::uint32_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    adj.neighbors[cursor[u]++] = v;
    if (u != v) adj.neighbors[cursor[v]++] = u;
  }
  return adj;
}

Eigen::MatrixXd sgc_propagate(const LocalAdjacency& adj, const Eigen::MatrixXd& x,
                              std::uint32_t hops) {
  if (adj.rows() != static_cast<std::uint32_t>(x.rows()))
    throw DataError("adjacency and feature row counts differ");
  Eigen::MatrixXd cur = x;
  Eigen::MatrixXd next(x.rows(), x.cols());
  for (std::uint32_t round = 0; round < hops; ++round) {
    for (std::uint32_t i = 0; i < adj.rows(); ++i) {
      Eigen::RowVectorXd acc = cur.row(i);
      for (std::uint32_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e)
        acc += cur.row(adj.neighbors[e]);
      next.row(i) = acc / (1.0 + (adj.offsets[i + 1] - adj.offsets[i]));
    }
    cur.swap(next);
  }
  return cur;
}

ModelParams zero_params(std::uint32_t dim, std::uint32_t classes) {
  ModelParams p;
  p.weight = Eigen::MatrixXd::Zero(dim, classes);
  p.bias = Eigen::VectorXd::Zero(classes);
  return p;
}

double softmax_loss(const Eigen::MatrixXd& weight, const Eigen::VectorXd& bias,
                    const Eigen::MatrixXd& x, const std::vector<std::int32_t>& y) {
  Eigen::MatrixXd z = logits(weight, bias, x);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    double m = z.row(i).maxCoeff();
    double lse = m + std::log((z.row(i).array() - m).exp().sum());
    loss += lse - z(i, y[static_cast<std::size_t>(i)]);
  }
  return loss / static_cast<double>(z.rows());
}

void softmax_gradient(const Eigen::MatrixXd& weight, const Eigen::VectorXd& bias,
                      const Eigen::MatrixXd& x, const std::vector<std::int32_t>& y,
                      Eigen::MatrixXd& grad_weight, Eigen::VectorXd& grad_bias) {
  Eigen::MatrixXd p = softmax_rows(logits(weight, bias, x));
  for (Eigen::Index i = 0; i < p.rows(); ++i) p(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  p /= static_cast<double>(p.rows());
  grad_weight.noalias() = x.transpose() * p;
  grad_bias = p.colwise().sum();
}

void train_epochs(ModelParams& params, const Eigen::MatrixXd& x,
                  const std::vector<std::int32_t>& labels,
                  const std::vector<std::uint32_t>& train_rows, const TrainConfig& cfg,
                  std::uint64_t epoch_begin, std::uint64_t epoch_end, std::uint64_t seed) {
  if (train_rows.empty()) {
    std::cerr << "warning: empty training set, parameters left unchanged\n";
    params.epochs_trained = epoch_end;
    return;
  }
  if (cfg.batch == 0) throw ConfigError("batch size must be >= 1");
  std::vector<std::uint32_t> order(train_rows);
  Eigen::MatrixXd xb;
  std::vector<std::int32_t> yb;
  Eigen::MatrixXd gw(params.weight.rows(), params.weight.cols());
  Eigen::VectorXd gb(params.bias.size());
  for (std::uint64_t epoch = epoch_begin; epoch < epoch_end; ++epoch) {
    std::mt19937_64 rng(seed_for(seed, epoch));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      std::size_t count = std::min<std::size_t>(cfg.batch, order.size() - start);
      xb.resize(static_cast<Eigen::Index>(count), x.cols());
      yb.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        xb.row(static_cast<Eigen::Index>(i)) = x.row(order[start + i]);
        yb[i] = labels[order[start + i]];
      }
      softmax_gradient(params.weight, params.bias, xb, yb, gw, gb);
      params.weight -= cfg.lr * gw;
      params.bias -= cfg.lr * gb;
    }
  }
  params.epochs_trained = epoch_end;
}

ModelParams train_local(const Eigen::MatrixXd& x, const std::vector<std::int32_t>& labels,
                        const std::vector<std::uint32_t>& train_rows, const TrainConfig& cfg) {
  std::uint32_t classes = 0;
  for (std::int32_t label : labels) classes = std::max(classes, static_cast<std::uint32_t>(label) + 1);
  ModelParams params = zero_params(static_cast<std::uint32_t>(x.cols()), std::max(classes, 1u));
  train_epochs(params, x, labels, train_rows, cfg, 0, cfg.epochs, cfg.seed);
  return params;
}

std::vector<double> sync_weights(const std::vector<std::uint64_t>& train_counts) {
  std::uint64_t total = std::accumulate(train_counts.begin(), train_counts.end(),
                                        std::uint64_t{0});
  if (train_counts.empty() || total == 0)
    throw DataError("model averaging requires a nonzero training-node count");
  std::vector<double> alpha(train_counts.size());
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < train_counts.size(); ++i) {
    alpha[i] = static_cast<double>(train_counts[i]) / static_cast<double>(total);
    partial += alpha[i];
  }
  alpha.back() = 1.0 - partial;
  return alpha;
}

ModelParams model_average(const std::vector<ModelParams>& params,
                          const std::vector<std::uint64_t>& train_counts) {
  if (params.empty() || params.size() != train_counts.size())
    throw DataError("model averaging needs one training count per replica");
  for (const ModelParams& p : params)
    if (p.weight.rows() != params[0].weight.rows() ||
        p.weight.cols() != params[0].weight.cols() ||
        p.bias.size() != params[0].bias.size())
      throw DataError("model shapes differ across replicas");
  std::vector<double> alpha = sync_weights(train_counts);
  ModelParams avg = zero_params(static_cast<std::uint32_t>(params[0].weight.rows()),
                                static_cast<std::uint32_t>(params[0].weight.cols()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    avg.weight += alpha[i] * params[i].weight;
    avg.bias += alpha[i] * params[i].bias;
  }
  avg.epochs_trained = params[0].epochs_trained;
  return avg;
}

double evaluate_micro_f1(const ModelParams& params, const Eigen::MatrixXd& x,
                         const std::vector<std::int32_t>& labels,
                         const std::vector<std::uint32_t>& mask_rows) {
  if (mask_rows.empty()) throw DataError("evaluation mask is empty");
  const std::uint32_t classes = static_cast<std::uint32_t>(params.weight.cols());
  std::vector<std::uint64_t> tp(classes, 0), fp(classes, 0), fn(classes, 0);
  for (std::uint32_t row : mask_rows) {
    Eigen::RowVectorXd z =
        x.row(row) * params.weight + params.bias.transpose();
    Eigen::Index pred;
    z.maxCoeff(&pred);
    std::int32_t truth = labels[row];
    if (pred == truth) {
      tp[static_cast<std::uint32_t>(truth)]++;
    } else {
      fp[static_cast<std::uint32_t>(pred)]++;
      fn[static_cast<std::uint32_t>(truth)]++;
    }
  }
  std::uint64_t tp_sum = std::accumulate(tp.begin(), tp.end(), std::uint64_t{0});
  std::uint64_t fp_sum = std::accumulate(fp.begin(), fp.end(), std::uint64_t{0});
  std::uint64_t fn_sum = std::accumulate(fn.begin(), fn.end(), std::uint64_t{0});
  double denom = 2.0 * tp_sum + fp_sum + fn_sum;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp_sum) / denom;
}

namespace {

Eigen::MatrixXd load_feature_rows(const std::filesystem::path& path) {
  FeatureFileReader reader(path);
  Eigen::MatrixXd x(reader.info().rows, reader.info().dim);
  std::vector<float> row(reader.info().dim);
  for (std::uint64_t i = 0; i < reader.info().rows; ++i) {
    reader.read_row(i, row);
    for (std::uint32_t c = 0; c < reader.info().dim; ++c)
      x(static_cast<Eigen::Index>(i), c) = row[c];
  }
  return x;
}

}  // namespace

TrainingData load_training_data(const StoredArtifact& artifact,
                                const std::filesystem::path& artifact_dir,
                                const EdgeStream& full_stream,
                                const std::filesystem::path& global_features) {
  if (!artifact.manifest.has_meta)
    throw DataError("artifact has no labels; partition with --nodes to enable training");
  TrainingData data;
  const PartitionedGraph& g = artifact.graph;

  // global shard
  data.global.features = load_feature_rows(global_features);
  const std::uint64_t n = static_cast<std::uint64_t>(data.global.features.rows());
  if (n != g.num_nodes)
    throw DataError("feature file row count does not match the graph");
  data.global.labels.assign(n, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(g.num_edges);
  full_stream.for_each([&](const Edge& e) {
    if (e.u >= n || e.v >= n)
      throw DataError("training requires dense external ids in [0,|V|)");
    pairs.emplace_back(static_cast<std::uint32_t>(e.u), static_cast<std::uint32_t>(e.v));
  });
  data.global.adjacency = build_adjacency(static_cast<std::uint32_t>(n), pairs);
  for (const auto& [node, meta] : artifact.meta) {
    if (node >= n) throw DataError("node meta refers to an id outside [0,|V|)");
    data.global.labels[node] = meta.label;
    std::uint32_t row = static_cast<std::uint32_t>(node);
    switch (meta.role) {
      case NodeRole::train: data.global.train_rows.push_back(row); break;
      case NodeRole::val: data.global.val_rows.push_back(row); break;
      case NodeRole::test: data.global.test_rows.push_back(row); break;
      default: break;
    }
  }
  std::sort(data.global.train_rows.begin(), data.global.train_rows.end());
  std::sort(data.global.val_rows.begin(), data.global.val_rows.end());
  std::sort(data.global.test_rows.begin(), data.global.test_rows.end());

  // per-partition shards
  for (std::uint32_t s = 0; s < g.p; ++s) {
    const GraphPartition& part = g.parts[s];
    Shard shard;
    std::unordered_map<ExtNodeId, std::uint32_t> local;
    local.reserve(part.nodes.size());
    shard.labels.resize(part.nodes.size());
    for (std::uint32_t i = 0; i < part.nodes.size(); ++i) {
      const NodeRecord& rec = part.nodes[i];
      local[rec.node] = i;
      auto it = artifact.meta.find(rec.node);
      shard.labels[i] = it == artifact.meta.end() ? 0 : it->second.label;
      if (rec.owner && rec.role == NodeRole::train) shard.train_rows.push_back(i);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> local_pairs;
    local_pairs.reserve(part.edges.size());
    for (const Edge& e : part.edges)
      local_pairs.emplace_back(local.at(e.u), local.at(e.v));
    shard.adjacency =
        build_adjacency(static_cast<std::uint32_t>(part.nodes.size()), local_pairs);
    if (artifact.manifest.has_features) {
      shard.features = load_feature_rows(artifact_dir / ("part-" + std::to_string(s)) /
                                         "features.bin");
    } else {
      shard.features.resize(static_cast<Eigen::Index>(part.nodes.size()),
                            data.global.features.cols());
      for (std::uint32_t i = 0; i < part.nodes.size(); ++i)
        shard.features.row(i) =
            data.global.features.row(static_cast<Eigen::Index>(part.nodes[i].node));
    }
    data.shards.push_back(std::move(shard));
  }
  return data;
}

DistTrainResult distributed_train(const TrainingData& data, std::uint32_t workers,
                                  std::uint32_t sync_interval, const TrainConfig& cfg) {
  const std::uint32_t p = static_cast<std::uint32_t>(data.shards.size());
  if (workers == 0 || p == 0) throw ConfigError("need at least one worker and one partition");
  if (p % workers != 0)
    throw ConfigError("partition count must be a multiple of the worker count");
  if (sync_interval == 0) throw ConfigError("sync interval must be >= 1");

  std::vector<Eigen::MatrixXd> propagated;
  std::vector<std::uint64_t> counts;
  propagated.reserve(p);
  for (const Shard& shard : data.shards) {
    propagated.push_back(sgc_propagate(shard.adjacency, shard.features, cfg.prop_hops));
    counts.push_back(shard.train_rows.size());
  }
  Eigen::MatrixXd global_x =
      sgc_propagate(data.global.adjacency, data.global.features, cfg.prop_hops);

  std::uint32_t classes = 0;
  for (std::int32_t label : data.global.labels)
    classes = std::max(classes, static_cast<std::uint32_t>(label) + 1);

  DistTrainResult result;
  ModelParams shared =
      zero_params(static_cast<std::uint32_t>(global_x.cols()), std::max(classes, 1u));
  std::uint64_t done = 0;
  while (done < cfg.epochs) {
    std::uint64_t chunk = std::min<std::uint64_t>(sync_interval, cfg.epochs - done);
    std::vector<ModelParams> replicas(p, shared);
    // workers sequence their partitions; the outcome is schedule-independent
    for (std::uint32_t i = 0; i < p; ++i)
      train_epochs(replicas[i], propagated[i], data.shards[i].labels,
                   data.shards[i].train_rows, cfg, done, done + chunk, cfg.seed + i);
    shared = model_average(replicas, counts);
    done += chunk;
    result.averaging_ops++;
    SyncPoint point;
    point.epoch = done;
    point.syncs = result.averaging_ops;
    point.val_f1 = data.global.val_rows.empty()
                       ? 0.0
                       : evaluate_micro_f1(shared, global_x, data.global.labels,
                                           data.global.val_rows);
    point.test_f1 = data.global.test_rows.empty()
                        ? 0.0
                        : evaluate_micro_f1(shared, global_x, data.global.labels,
                                            data.global.test_rows);
    result.history.push_back(point);
  }
  result.params = std::move(shared);
  return result;
}

}  // namespace gnnpart
