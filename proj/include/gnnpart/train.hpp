#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnnpart/edge_stream.hpp"
#include "gnnpart/store.hpp"

namespace gnnpart {

// Compressed adjacency over local row indices. Neighbor lists are multisets
// exactly as given by the edge list; a stored self-loop contributes one
// occurrence on top of the implicit self term added during propagation.
struct LocalAdjacency {
  std::vector<std::uint32_t> offsets;  // size rows+1
  std::vector<std::uint32_t> neighbors;
  std::uint32_t rows() const {
    return offsets.empty() ? 0 : static_cast<std::uint32_t>(offsets.size() - 1);
  }
};

LocalAdjacency build_adjacency(std::uint32_t rows,
                               const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

// k rounds of degree-normalized mean aggregation with an added self term:
// x_i <- (x_i + sum of neighbor rows) / (1 + |N(i)|). k = 0 is the identity.
Eigen::MatrixXd sgc_propagate(const LocalAdjacency& adj, const Eigen::MatrixXd& x,
                              std::uint32_t hops);

struct ModelParams {
  Eigen::MatrixXd weight;  // dim x classes
  Eigen::VectorXd bias;    // classes
  std::uint64_t epochs_trained = 0;
};

ModelParams zero_params(std::uint32_t dim, std::uint32_t classes);

struct TrainConfig {
  std::uint32_t epochs = 100;
  double lr = 0.01;
  std::uint32_t batch = 512;
  std::uint32_t prop_hops = 2;
  std::uint64_t seed = 0;
};

double softmax_loss(const Eigen::MatrixXd& weight, const Eigen::VectorXd& bias,
                    const Eigen::MatrixXd& x, const std::vector<std::int32_t>& y);

void softmax_gradient(const Eigen::MatrixXd& weight, const Eigen::VectorXd& bias,
                      const Eigen::MatrixXd& x, const std::vector<std::int32_t>& y,
                      Eigen::MatrixXd& grad_weight, Eigen::VectorXd& grad_bias);

// Mini-batch gradient descent on the cross-entropy of a linear softmax
// classifier over pre-propagated features. Each epoch shuffles the training
// rows with an engine seeded from (seed, epoch index), which makes training
// resumable in chunks without changing the trajectory.
void train_epochs(ModelParams& params, const Eigen::MatrixXd& x,
                  const std::vector<std::int32_t>& labels,
                  const std::vector<std::uint32_t>& train_rows, const TrainConfig& cfg,
                  std::uint64_t epoch_begin, std::uint64_t epoch_end, std::uint64_t seed);

ModelParams train_local(const Eigen::MatrixXd& x, const std::vector<std::int32_t>& labels,
                        const std::vector<std::uint32_t>& train_rows, const TrainConfig& cfg);

// Proportional weights n_i / sum(n); the last entry absorbs rounding so the
// sum is exactly 1.0.
std::vector<double> sync_weights(const std::vector<std::uint64_t>& train_counts);

ModelParams model_average(const std::vector<ModelParams>& params,
                          const std::vector<std::uint64_t>& train_counts);

// Micro-averaged F1 from globally pooled per-class TP/FP/FN counts. For
// single-label multiclass prediction this coincides with accuracy.
double evaluate_micro_f1(const ModelParams& params, const Eigen::MatrixXd& x,
                         const std::vector<std::int32_t>& labels,
                         const std::vector<std::uint32_t>& mask_rows);

// One graph prepared for the simulator: features, adjacency and role rows,
// all in local row space.
struct Shard {
  Eigen::MatrixXd features;
  LocalAdjacency adjacency;
  std::vector<std::int32_t> labels;
  std::vector<std::uint32_t> train_rows;
  std::vector<std::uint32_t> val_rows;
  std::vector<std::uint32_t> test_rows;
};

struct TrainingData {
  std::vector<Shard> shards;  // one per partition; train_rows = owned train nodes
  Shard global;               // the unpartitioned graph, for reference runs and eval
};

// Assembles shards from a stored artifact plus the source dataset. External
// ids must be dense (0..|V|-1) so they can double as feature row indices.
TrainingData load_training_data(const StoredArtifact& artifact,
                                const std::filesystem::path& artifact_dir,
                                const EdgeStream& full_stream,
                                const std::filesystem::path& global_features);

struct SyncPoint {
  std::uint64_t epoch = 0;
  std::uint64_t syncs = 0;
  double val_f1 = 0.0;
  double test_f1 = 0.0;
};

struct DistTrainResult {
  ModelParams params;
  std::vector<SyncPoint> history;
  std::uint64_t averaging_ops = 0;
};

// Data-parallel simulation: every partition trains its own model replica for
// sync_interval epochs from the shared weights, then all replicas are
// averaged proportionally to their training-node counts and redistributed.
// Workers only schedule partitions (p must be a multiple of q), so results
// do not depend on the worker count.
DistTrainResult distributed_train(const TrainingData& data, std::uint32_t workers,
                                  std::uint32_t sync_interval, const TrainConfig& cfg);

}  // namespace gnnpart
