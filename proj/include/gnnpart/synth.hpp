#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gnnpart/completion.hpp"
#include "gnnpart/edge_stream.hpp"

namespace gnnpart {

// Degree-corrected stochastic block model with power-law-ish expected
// degrees. Classes double as blocks; features are noisy class means, so the
// label signal lives mostly in the neighborhood structure.
struct SynthConfig {
  std::string name = "synthetic";
  std::uint64_t nodes = 1000;
  std::uint64_t edges = 3000;
  std::uint32_t classes = 4;
  std::uint32_t feature_dim = 32;
  double mixing = 0.2;          // fraction of endpoints drawn ignoring the block
  double degree_skew = 0.75;    // weight ~ (rank + r0)^(-skew)
  double feature_signal = 1.0;  // class-mean scale
  double feature_noise = 2.0;   // per-entry gaussian noise
  double train_frac = 0.7;
  double val_frac = 0.15;
  double test_frac = 0.15;
  std::uint64_t seed = 1;
};

// Stand-ins for the standard citation benchmarks: node/edge/class/feature
// counts and split fractions follow the published statistics; connectivity
// and features come from the generator above.
SynthConfig synth_preset(const std::string& name);

struct SynthDataset {
  std::vector<Edge> edges;  // external ids 0..nodes-1, no loops, no duplicates
  std::vector<std::int32_t> labels;
  std::vector<NodeRole> roles;
};

SynthDataset synth_graph(const SynthConfig& cfg);

NodeMetaMap to_node_meta(const SynthDataset& data);

// Writes edges.<tsv|bin>, nodes.tsv and (optionally) features.bin into dir;
// returns the edge file path. Feature rows are streamed out one at a time.
std::filesystem::path write_synth_dataset(const SynthDataset& data, const SynthConfig& cfg,
                                          const std::filesystem::path& dir,
                                          EdgeFormat format = EdgeFormat::text_tsv,
                                          bool with_features = true);

}  // namespace gnnpart
