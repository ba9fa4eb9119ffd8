#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <vector>

#include "gnnpart/common.hpp"

namespace gnnpart {

enum class EdgeFormat { text_tsv, binary_u64 };

EdgeFormat parse_edge_format(const std::string& name);

struct Edge {
  ExtNodeId u;
  ExtNodeId v;
  bool operator==(const Edge&) const = default;
};

class EdgeStream;

// Single-consumer cursor over one replay of a stream. Holds one IO buffer;
// never materializes the edge list.
class EdgeReader {
 public:
  bool next(Edge& e);
  std::uint64_t malformed_lines() const { return malformed_; }

 private:
  friend class EdgeStream;
  explicit EdgeReader(const EdgeStream& stream);

  bool next_raw(Edge& e);
  bool fill();

  std::ifstream in_;
  EdgeFormat format_;
  bool add_reverse_;
  bool have_pending_ = false;
  Edge pending_{};
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::string line_;
  std::uint64_t malformed_ = 0;
};

// Replayable sequence of undirected edges backed by a file.
//
// Text format: one "u<TAB>v" per line, UTF-8, lines starting with '#'
// ignored. Lines that do not parse as two unsigned integers are counted as
// malformed and skipped.
//
// Binary format: optional "EDG1" magic, then consecutive little-endian
// u64 pairs. A payload not divisible by 16 bytes is rejected.
//
// With add_reverse set, every non-loop edge (u,v) is replayed as (u,v)
// followed by (v,u); this mirrors the usual directed-to-undirected dataset
// conversion and doubles the degrees accordingly.
class EdgeStream {
 public:
  EdgeStream(std::filesystem::path path, EdgeFormat format, bool add_reverse = false);

  EdgeReader reader() const { return EdgeReader(*this); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    EdgeReader r = reader();
    Edge e;
    while (r.next(e)) fn(e);
    note_scan(r);
  }

  // Replays once on first call; cached afterwards.
  std::uint64_t edge_count() const;
  std::uint64_t malformed_lines() const;

  const std::filesystem::path& path() const { return path_; }
  EdgeFormat format() const { return format_; }
  bool add_reverse() const { return add_reverse_; }

 private:
  friend class EdgeReader;
  void note_scan(const EdgeReader& r) const;
  void scan() const;

  std::filesystem::path path_;
  EdgeFormat format_;
  bool add_reverse_;
  mutable bool scanned_ = false;
  mutable std::uint64_t edges_ = 0;
  mutable std::uint64_t malformed_ = 0;
};

void write_binary_edges(const std::filesystem::path& path, const std::vector<Edge>& edges);
void write_text_edges(const std::filesystem::path& path, const std::vector<Edge>& edges);

// First-pass result: the external-to-dense dictionary plus exact degrees.
// This is the only per-node state the streaming passes are allowed to keep.
struct GraphIndex {
  std::unordered_map<ExtNodeId, NodeId> ext_to_dense;
  std::vector<ExtNodeId> dense_to_ext;
  std::vector<std::uint32_t> degree;  // self-loops contribute 2
  std::uint64_t num_edges = 0;        // records streamed, each counted once
  std::uint64_t num_self_loops = 0;

  NodeId num_nodes() const { return static_cast<NodeId>(dense_to_ext.size()); }

  NodeId dense(ExtNodeId ext) const {
    auto it = ext_to_dense.find(ext);
    if (it == ext_to_dense.end())
      throw DataError("node " + std::to_string(ext) + " missing from degree table");
    return it->second;
  }

  NodeId try_dense(ExtNodeId ext) const {
    auto it = ext_to_dense.find(ext);
    return it == ext_to_dense.end() ? kNoNode : it->second;
  }

  std::uint64_t footprint_bytes() const {
    return map_bytes(ext_to_dense) + vec_bytes(dense_to_ext) + vec_bytes(degree);
  }
};

GraphIndex compute_degrees(const EdgeStream& stream);

}  // namespace gnnpart
