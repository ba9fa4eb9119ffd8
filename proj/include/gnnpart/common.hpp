#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gnnpart {

using ExtNodeId = std::uint64_t;  // node id as written in input files
using NodeId = std::uint32_t;     // dense index, assigned in first-seen order
using PartId = std::uint32_t;

inline constexpr NodeId kNoNode = 0xFFFFFFFFu;
inline constexpr std::uint32_t kNoCluster = 0xFFFFFFFFu;

// Bad command line / out-of-range parameters. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or inconsistent input data. CLI exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64 finalizer; default placement hash for the degree-hash partitioner.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t identity_hash(std::uint64_t x) { return x; }

// Stable per-stream seeding so derived RNG sequences are independent.
inline std::uint64_t seed_for(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x51ed2701));
}

template <typename Vec>
std::uint64_t vec_bytes(const Vec& v) {
  return v.capacity() * sizeof(typename Vec::value_type);
}

// Rough allocation accounting for unordered_map: per-node storage plus the
// bucket array. Close enough for the O(|V|) memory-contract checks.
template <typename Map>
std::uint64_t map_bytes(const Map& m) {
  const std::uint64_t node = sizeof(typename Map::value_type) + 2 * sizeof(void*);
  return m.size() * node + m.bucket_count() * sizeof(void*);
}

}  // namespace gnnpart
