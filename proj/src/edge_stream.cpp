#include "gnnpart/edge_stream.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>

namespace gnnpart {

namespace {
constexpr std::size_t kBufSize = 1 << 20;
constexpr std::array<char, 4> kEdgeMagic = {'E', 'D', 'G', '1'};

std::uint64_t load_le64(const char* p) {
  std::uint64_t x;
  std::memcpy(&x, p, 8);
  return x;  // little-endian hosts only; asserted at build time below
}
static_assert(std::endian::native == std::endian::little,
              "binary edge files are little-endian");
}  // namespace

EdgeFormat parse_edge_format(const std::string& name) {
  if (name == "text" || name == "tsv" || name == "text-tsv") return EdgeFormat::text_tsv;
  if (name == "binary" || name == "bin") return EdgeFormat::binary_u64;
  throw ConfigError("unknown edge format: " + name);
}

EdgeStream::EdgeStream(std::filesystem::path path, EdgeFormat format, bool add_reverse)
    : path_(std::move(path)), format_(format), add_reverse_(add_reverse) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path_, ec))
    throw DataError("edge file not readable: " + path_.string());
  if (format_ == EdgeFormat::binary_u64) {
    auto size = std::filesystem::file_size(path_);
    std::uint64_t payload = size;
    if (size >= kEdgeMagic.size()) {
      std::ifstream probe(path_, std::ios::binary);
      std::array<char, 4> head{};
      probe.read(head.data(), head.size());
      if (probe && head == kEdgeMagic) payload = size - kEdgeMagic.size();
    }
    if (payload % 16 != 0)
      throw DataError("binary edge file has truncated record: " + path_.string());
  }
}

EdgeReader::EdgeReader(const EdgeStream& stream)
    : in_(stream.path(), std::ios::binary),
      format_(stream.format()),
      add_reverse_(stream.add_reverse()),
      buf_(kBufSize) {
  if (!in_) throw DataError("cannot open edge file: " + stream.path().string());
  if (format_ == EdgeFormat::binary_u64) {
    std::array<char, 4> head{};
    in_.read(head.data(), head.size());
    std::size_t got = static_cast<std::size_t>(in_.gcount());
    if (got == head.size() && head == kEdgeMagic) {
      // consume the magic
    } else {
      // raw pair file; replay the bytes we just read
      std::memcpy(buf_.data(), head.data(), got);
      end_ = got;
    }
    in_.clear();
  }
}

bool EdgeReader::fill() {
  if (pos_ < end_) {
    std::memmove(buf_.data(), buf_.data() + pos_, end_ - pos_);
    end_ -= pos_;
    pos_ = 0;
  } else {
    pos_ = end_ = 0;
  }
  if (eof_) return end_ > pos_;
  in_.read(buf_.data() + end_, static_cast<std::streamsize>(buf_.size() - end_));
  std::size_t got = static_cast<std::size_t>(in_.gcount());
  end_ += got;
  if (got == 0) eof_ = true;
  return end_ > pos_;
}

bool EdgeReader::next_raw(Edge& e) {
  if (format_ == EdgeFormat::binary_u64) {
    if (end_ - pos_ < 16 && !fill() && end_ - pos_ < 16) return false;
    if (end_ - pos_ < 16) return false;
    e.u = load_le64(buf_.data() + pos_);
    e.v = load_le64(buf_.data() + pos_ + 8);
    pos_ += 16;
    return true;
  }
  // text: assemble one line at a time from the chunk buffer
  for (;;) {
    const char* nl = static_cast<const char*>(
        memchr(buf_.data() + pos_, '\n', end_ - pos_));
    if (nl == nullptr) {
      line_.append(buf_.data() + pos_, end_ - pos_);
      pos_ = end_;
      if (!fill()) {
        if (line_.empty()) return false;
      } else {
        continue;
      }
    } else {
      line_.append(buf_.data() + pos_, static_cast<std::size_t>(nl - (buf_.data() + pos_)));
      pos_ = static_cast<std::size_t>(nl - buf_.data()) + 1;
    }
    std::string line = std::move(line_);
    line_.clear();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') {
      if (eof_ && pos_ >= end_ && line.empty()) return false;
      continue;
    }
    const char* b = line.data();
    const char* end = b + line.size();
    ExtNodeId u = 0, v = 0;
    auto r1 = std::from_chars(b, end, u);
    if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != '\t') {
      ++malformed_;
      continue;
    }
    auto r2 = std::from_chars(r1.ptr + 1, end, v);
    if (r2.ec != std::errc() || r2.ptr != end) {
      ++malformed_;
      continue;
    }
    e.u = u;
    e.v = v;
    return true;
  }
}

bool EdgeReader::next(Edge& e) {
  if (have_pending_) {
    e = pending_;
    have_pending_ = false;
    return true;
  }
  if (!next_raw(e)) return false;
  if (add_reverse_ && e.u != e.v) {
    pending_ = Edge{e.v, e.u};
    have_pending_ = true;
  }
  return true;
}

void EdgeStream::note_scan(const EdgeReader& r) const {
  if (!scanned_) malformed_ = r.malformed_lines();
}

void EdgeStream::scan() const {
  EdgeReader r = reader();
  Edge e;
  std::uint64_t n = 0;
  while (r.next(e)) ++n;
  edges_ = n;
  malformed_ = r.malformed_lines();
  scanned_ = true;
}

std::uint64_t EdgeStream::edge_count() const {
  if (!scanned_) scan();
  return edges_;
}

std::uint64_t EdgeStream::malformed_lines() const {
  if (!scanned_) scan();
  return malformed_;
}

void write_binary_edges(const std::filesystem::path& path, const std::vector<Edge>& edges) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write edge file: " + path.string());
  out.write(kEdgeMagic.data(), kEdgeMagic.size());
  for (const Edge& e : edges) {
    out.write(reinterpret_cast<const char*>(&e.u), 8);
    out.write(reinterpret_cast<const char*>(&e.v), 8);
  }
  if (!out) throw DataError("short write: " + path.string());
}

void write_text_edges(const std::filesystem::path& path, const std::vector<Edge>& edges) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write edge file: " + path.string());
  for (const Edge& e : edges) out << e.u << '\t' << e.v << '\n';
  if (!out) throw DataError("short write: " + path.string());
}

GraphIndex compute_degrees(const EdgeStream& stream) {
  GraphIndex idx;
  auto intern = [&idx](ExtNodeId ext) -> NodeId {
    auto [it, fresh] = idx.ext_to_dense.try_emplace(ext, idx.num_nodes());
    if (fresh) {
      idx.dense_to_ext.push_back(ext);
      idx.degree.push_back(0);
    }
    return it->second;
  };
  stream.for_each([&](const Edge& e) {
    NodeId u = intern(e.u);
    NodeId v = intern(e.v);
    idx.num_edges++;
    if (u == v) {
      idx.degree[u] += 2;
      idx.num_self_loops++;
    } else {
      idx.degree[u] += 1;
      idx.degree[v] += 1;
    }
  });
  return idx;
}

}  // namespace gnnpart
