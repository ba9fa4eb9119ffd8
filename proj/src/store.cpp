#include "gnnpart/store.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>

#include "gnnpart/edge_stream.hpp"

namespace gnnpart {

namespace {

constexpr std::array<char, 4> kFeatureMagic = {'F', 'E', 'A', '1'};
constexpr std::uint32_t kDtypeF32 = 1;

void write_feature_header(std::ofstream& out, std::uint64_t rows, std::uint32_t dim) {
  out.write(kFeatureMagic.data(), kFeatureMagic.size());
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&kDtypeF32), 4);
}

[[noreturn]] void corrupt(const std::string& what) {
  throw DataError("corrupt artifact: " + what);
}

}  // namespace

FeatureFileInfo read_feature_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open feature file: " + path.string());
  std::array<char, 4> magic{};
  FeatureFileInfo info;
  std::uint32_t dtype = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&info.rows), 8);
  in.read(reinterpret_cast<char*>(&info.dim), 4);
  in.read(reinterpret_cast<char*>(&dtype), 4);
  if (!in || magic != kFeatureMagic) throw DataError("bad feature header: " + path.string());
  if (dtype != kDtypeF32) throw DataError("unsupported feature dtype: " + path.string());
  auto expect = kFeatureHeaderBytes + info.rows * std::uint64_t{info.dim} * 4;
  if (std::filesystem::file_size(path) != expect)
    throw DataError("feature file size mismatch: " + path.string());
  return info;
}

FeatureFileReader::FeatureFileReader(const std::filesystem::path& path)
    : in_(path, std::ios::binary), info_(read_feature_header(path)), path_(path) {
  if (!in_) throw DataError("cannot open feature file: " + path.string());
}

void FeatureFileReader::read_row(std::uint64_t row, std::span<float> out) {
  if (row >= info_.rows)
    throw DataError("feature row " + std::to_string(row) + " out of range in " +
                    path_.string());
  if (out.size() != info_.dim) throw DataError("feature row buffer has wrong width");
  in_.seekg(static_cast<std::streamoff>(kFeatureHeaderBytes +
                                        row * std::uint64_t{info_.dim} * 4));
  in_.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size() * 4));
  if (!in_) throw DataError("short feature read: " + path_.string());
}

FeatureFileWriter::FeatureFileWriter(const std::filesystem::path& path, std::uint32_t dim)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), dim_(dim) {
  if (!out_) throw DataError("cannot write feature file: " + path.string());
  write_feature_header(out_, 0, dim_);
}

void FeatureFileWriter::write_row(std::span<const float> row) {
  if (row.size() != dim_) throw DataError("feature row buffer has wrong width");
  out_.write(reinterpret_cast<const char*>(row.data()),
             static_cast<std::streamsize>(row.size() * 4));
  rows_++;
}

std::uint64_t FeatureFileWriter::finish() {
  if (finished_) return rows_;
  out_.seekp(4);
  out_.write(reinterpret_cast<const char*>(&rows_), 8);
  out_.close();
  if (!out_) throw DataError("short write: " + path_.string());
  finished_ = true;
  return rows_;
}

void write_feature_matrix(const std::filesystem::path& path, std::uint64_t rows,
                          std::uint32_t dim, std::span<const float> row_major) {
  if (row_major.size() != rows * std::uint64_t{dim})
    throw DataError("feature buffer does not match rows*dim");
  FeatureFileWriter w(path, dim);
  for (std::uint64_t i = 0; i < rows; ++i) w.write_row(row_major.subspan(i * dim, dim));
  w.finish();
}

std::vector<std::filesystem::path> split_features(const std::filesystem::path& features,
                                                  const PartitionedGraph& g,
                                                  const std::filesystem::path& out_dir) {
  FeatureFileReader reader(features);
  std::vector<float> row(reader.info().dim);
  std::vector<std::filesystem::path> outputs;
  for (std::uint32_t s = 0; s < g.p; ++s) {
    std::filesystem::path part_dir = out_dir / ("part-" + std::to_string(s));
    std::filesystem::create_directories(part_dir);
    std::filesystem::path out_path = part_dir / "features.bin";
    FeatureFileWriter writer(out_path, reader.info().dim);
    for (const NodeRecord& rec : g.parts[s].nodes) {
      reader.read_row(rec.node, row);
      writer.write_row(row);
    }
    writer.finish();
    outputs.push_back(out_path);
  }
  return outputs;
}

NodeMetaMap read_node_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open node meta file: " + path.string());
  NodeMetaMap meta;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const char* b = line.data();
    const char* end = b + line.size();
    ExtNodeId node = 0;
    std::int32_t label = 0;
    auto r1 = std::from_chars(b, end, node);
    if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != '\t')
      throw DataError("bad node meta line: " + line);
    auto r2 = std::from_chars(r1.ptr + 1, end, label);
    if (r2.ec != std::errc() || r2.ptr == end || *r2.ptr != '\t')
      throw DataError("bad node meta line: " + line);
    std::string role(r2.ptr + 1, end);
    meta[node] = NodeMeta{label, parse_role(role)};
  }
  return meta;
}

void write_node_meta(const std::filesystem::path& path, const NodeMetaMap& meta) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write node meta file: " + path.string());
  std::vector<ExtNodeId> ids;
  ids.reserve(meta.size());
  for (const auto& [node, _] : meta) ids.push_back(node);
  std::sort(ids.begin(), ids.end());
  for (ExtNodeId node : ids) {
    const NodeMeta& m = meta.at(node);
    out << node << '\t' << m.label << '\t' << role_name(m.role) << '\n';
  }
  if (!out) throw DataError("short write: " + path.string());
}

PlanResult plan_partition_count(std::uint32_t workers, double memory_gb,
                                std::optional<double> reserved_gb, double data_gb) {
  if (workers == 0) throw ConfigError("worker count must be >= 1");
  if (data_gb < 0) throw ConfigError("data size must be >= 0");
  double reserved = reserved_gb.value_or(memory_gb * 2.0 / 3.0);
  if (reserved < 0) throw ConfigError("reserved memory must be >= 0");
  if (memory_gb <= reserved)
    throw ConfigError("no usable worker memory: M <= T");
  const double usable = memory_gb - reserved;
  PlanResult plan;
  plan.reserved_gb = reserved;
  plan.capacity_gb = workers * usable;
  if (data_gb <= plan.capacity_gb) {
    plan.partitions = workers;
  } else {
    double multiple = std::ceil(data_gb / usable / workers);
    plan.partitions = workers * static_cast<std::uint32_t>(multiple);
  }
  return plan;
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["schema"] = schema;
  j["algorithm"] = algorithm;
  j["num_partitions"] = num_partitions;
  j["num_nodes"] = num_nodes;
  j["num_edges"] = num_edges;
  j["feature_dim"] = feature_dim;
  j["params"] = params;
  j["replication_factor"] = replication_factor;
  j["has_features"] = has_features;
  j["has_meta"] = has_meta;
  nlohmann::json rows = nlohmann::json::array();
  for (const PartEntry& part : parts) {
    rows.push_back({{"dir", part.dir},
                    {"nodes", part.nodes},
                    {"owned", part.owned},
                    {"edges", part.edges}});
  }
  j["partitions"] = rows;
  return j;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
  Manifest m;
  m.schema = j.at("schema").get<int>();
  if (m.schema != 1) throw DataError("unsupported manifest schema");
  m.algorithm = j.at("algorithm").get<std::string>();
  m.num_partitions = j.at("num_partitions").get<std::uint32_t>();
  m.num_nodes = j.at("num_nodes").get<std::uint64_t>();
  m.num_edges = j.at("num_edges").get<std::uint64_t>();
  m.feature_dim = j.at("feature_dim").get<std::uint32_t>();
  m.params = j.at("params");
  m.replication_factor = j.at("replication_factor").get<double>();
  m.has_features = j.at("has_features").get<bool>();
  m.has_meta = j.at("has_meta").get<bool>();
  for (const auto& row : j.at("partitions")) {
    m.parts.push_back(PartEntry{row.at("dir").get<std::string>(),
                                row.at("nodes").get<std::uint64_t>(),
                                row.at("owned").get<std::uint64_t>(),
                                row.at("edges").get<std::uint64_t>()});
  }
  return m;
}

Manifest write_partitions(const PartitionedGraph& g, const std::filesystem::path& dir,
                          const std::string& algorithm, const nlohmann::json& params,
                          const NodeMetaMap* meta, const std::filesystem::path* features) {
  std::filesystem::create_directories(dir);
  Manifest manifest;
  manifest.algorithm = algorithm;
  manifest.num_partitions = g.p;
  manifest.num_nodes = g.num_nodes;
  manifest.num_edges = g.num_edges;
  manifest.params = params;
  manifest.replication_factor = replication_factor(g);
  manifest.has_meta = meta != nullptr;

  for (std::uint32_t s = 0; s < g.p; ++s) {
    const GraphPartition& part = g.parts[s];
    std::string part_name = "part-" + std::to_string(s);
    std::filesystem::path part_dir = dir / part_name;
    std::filesystem::create_directories(part_dir);
    write_binary_edges(part_dir / "edges.bin", part.edges);
    std::ofstream nodes(part_dir / "nodes.tsv", std::ios::trunc);
    if (!nodes) throw DataError("cannot write node table: " + (part_dir / "nodes.tsv").string());
    for (const NodeRecord& rec : part.nodes)
      nodes << rec.node << '\t' << (rec.owner ? 1 : 0) << '\t' << role_name(rec.role) << '\n';
    nodes.close();
    Manifest::PartEntry entry;
    entry.dir = part_name;
    entry.nodes = part.nodes.size();
    entry.owned = part.owned_count();
    entry.edges = part.edges.size();
    manifest.parts.push_back(entry);
  }

  if (meta != nullptr) write_node_meta(dir / "labels.tsv", *meta);
  if (features != nullptr) {
    manifest.has_features = true;
    manifest.feature_dim = read_feature_header(*features).dim;
    split_features(*features, g, dir);
  }

  // manifest last: its presence marks a complete artifact
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw DataError("cannot write manifest: " + (dir / "manifest.json").string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw DataError("short write: " + (dir / "manifest.json").string());
  return manifest;
}

StoredArtifact read_partitions(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("missing manifest (incomplete artifact): " + dir.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("unparseable manifest: ") + e.what());
  }
  StoredArtifact art;
  art.manifest = Manifest::from_json(j);
  PartitionedGraph& g = art.graph;
  g.p = art.manifest.num_partitions;
  g.num_nodes = art.manifest.num_nodes;
  g.num_edges = art.manifest.num_edges;
  if (art.manifest.parts.size() != g.p) corrupt("partition list length mismatch");
  g.parts.resize(g.p);

  for (std::uint32_t s = 0; s < g.p; ++s) {
    const Manifest::PartEntry& entry = art.manifest.parts[s];
    std::filesystem::path part_dir = dir / entry.dir;
    EdgeStream edges(part_dir / "edges.bin", EdgeFormat::binary_u64);
    GraphPartition& part = g.parts[s];
    edges.for_each([&part](const Edge& e) { part.edges.push_back(e); });
    if (part.edges.size() != entry.edges)
      corrupt("edge count mismatch in " + entry.dir);

    std::ifstream nodes(part_dir / "nodes.tsv");
    if (!nodes) corrupt("missing node table in " + entry.dir);
    std::string line;
    std::uint64_t owned = 0;
    while (std::getline(nodes, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const char* b = line.data();
      const char* end = b + line.size();
      NodeRecord rec{};
      int owner_flag = 0;
      auto r1 = std::from_chars(b, end, rec.node);
      if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != '\t')
        corrupt("bad node record in " + entry.dir);
      auto r2 = std::from_chars(r1.ptr + 1, end, owner_flag);
      if (r2.ec != std::errc() || r2.ptr == end || *r2.ptr != '\t')
        corrupt("bad node record in " + entry.dir);
      rec.owner = owner_flag != 0;
      rec.role = parse_role(std::string(r2.ptr + 1, end));
      owned += rec.owner ? 1 : 0;
      part.nodes.push_back(rec);
    }
    if (part.nodes.size() != entry.nodes)
      corrupt("node count mismatch in " + entry.dir);
    if (owned != entry.owned) corrupt("owner count mismatch in " + entry.dir);
    if (art.manifest.has_features) {
      FeatureFileInfo info = read_feature_header(part_dir / "features.bin");
      if (info.rows != entry.nodes || info.dim != art.manifest.feature_dim)
        corrupt("feature shape mismatch in " + entry.dir);
    }
  }
  std::uint64_t owned_total = 0;
  for (const auto& part : g.parts) owned_total += part.owned_count();
  if (owned_total != g.num_nodes) corrupt("ownership does not cover the node set");

  if (art.manifest.has_meta) art.meta = read_node_meta(dir / "labels.tsv");
  return art;
}

}  // namespace gnnpart
