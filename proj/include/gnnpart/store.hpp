#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnnpart/completion.hpp"
#include "gnnpart/metrics.hpp"

namespace gnnpart {

// Feature file: "FEA1" magic, |V| as u64-LE, dim as u32-LE, dtype tag
// (1 = f32-LE) as u32-LE, then row-major f32 rows indexed by node id.
struct FeatureFileInfo {
  std::uint64_t rows = 0;
  std::uint32_t dim = 0;
};

inline constexpr std::size_t kFeatureHeaderBytes = 20;

FeatureFileInfo read_feature_header(const std::filesystem::path& path);

class FeatureFileReader {
 public:
  explicit FeatureFileReader(const std::filesystem::path& path);
  const FeatureFileInfo& info() const { return info_; }
  // Random access; only one row is ever resident.
  void read_row(std::uint64_t row, std::span<float> out);

 private:
  std::ifstream in_;
  FeatureFileInfo info_;
  std::filesystem::path path_;
};

class FeatureFileWriter {
 public:
  FeatureFileWriter(const std::filesystem::path& path, std::uint32_t dim);
  void write_row(std::span<const float> row);
  // Patches the row count into the header and closes the file.
  std::uint64_t finish();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::uint32_t dim_;
  std::uint64_t rows_ = 0;
  bool finished_ = false;
};

void write_feature_matrix(const std::filesystem::path& path, std::uint64_t rows,
                          std::uint32_t dim, std::span<const float> row_major);

// Copies each partition's node rows (owners and replicas, node-table order)
// into part-<i>/features.bin under out_dir. Row-at-a-time random access; no
// whole-matrix buffer.
std::vector<std::filesystem::path> split_features(const std::filesystem::path& features,
                                                  const PartitionedGraph& g,
                                                  const std::filesystem::path& out_dir);

// node meta file: "node_id<TAB>label<TAB>role" per line, '#' comments.
NodeMetaMap read_node_meta(const std::filesystem::path& path);
void write_node_meta(const std::filesystem::path& path, const NodeMetaMap& meta);

struct PlanResult {
  std::uint32_t partitions = 0;
  double reserved_gb = 0.0;  // effective T
  double capacity_gb = 0.0;  // q * (M - T)
};

// Partition-count rule: p = q while the data fits in q*(M-T) GB, otherwise
// the smallest multiple of q with data/p <= M-T. T defaults to 2/3 of M.
PlanResult plan_partition_count(std::uint32_t workers, double memory_gb,
                                std::optional<double> reserved_gb, double data_gb);

struct Manifest {
  int schema = 1;
  std::string algorithm;
  std::uint32_t num_partitions = 0;
  std::uint64_t num_nodes = 0;
  std::uint64_t num_edges = 0;
  std::uint32_t feature_dim = 0;
  nlohmann::json params;  // algorithm parameters and seeds, verbatim
  double replication_factor = 1.0;
  struct PartEntry {
    std::string dir;
    std::uint64_t nodes = 0;
    std::uint64_t owned = 0;
    std::uint64_t edges = 0;
  };
  std::vector<PartEntry> parts;
  bool has_features = false;
  bool has_meta = false;

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

// Directory layout: manifest.json, labels.tsv (when meta is present) and
// part-<i>/{edges.bin,nodes.tsv[,features.bin]}. The manifest is written
// last and acts as the commit point.
Manifest write_partitions(const PartitionedGraph& g, const std::filesystem::path& dir,
                          const std::string& algorithm, const nlohmann::json& params,
                          const NodeMetaMap* meta = nullptr,
                          const std::filesystem::path* features = nullptr);

struct StoredArtifact {
  Manifest manifest;
  PartitionedGraph graph;
  NodeMetaMap meta;
};

// Rebuilds the partitioned graph from disk, verifying every count recorded
// in the manifest. Any mismatch raises DataError("corrupt artifact: ...").
StoredArtifact read_partitions(const std::filesystem::path& dir);

}  // namespace gnnpart
