#pragma once

// Synthetic corpora with a planted cluster structure, for checking that
// learned scorers pick up signal that lexical overlap alone misses.

#include <cstdint>
#include <vector>

#include "worldgen/corpus.hpp"

namespace worldgen {

struct PlantedCorpusSpec {
  std::size_t clusters = 20;
  std::size_t locations_per_cluster = 10;
  std::size_t neighbors_per_location = 4;
  /// Theme words per cluster; each description samples a few of them.
  std::size_t theme_words = 12;
  std::size_t description_theme_words = 4;
  /// Chance that a location name carries one theme word.
  double name_theme_prob = 0.3;
  std::size_t characters_per_cluster = 3;
  std::size_t objects_per_cluster = 4;
  std::uint64_t seed = 1;
  SplitRatios ratios{};
};

/// Cluster c holds locations [c * per_cluster, (c + 1) * per_cluster) in
/// corpus order; neighbors are drawn within the cluster. Includes the
/// standard filler library and element splits.
Corpus make_planted_corpus(const PlantedCorpusSpec& spec);

/// The 25 shipped filler locations.
std::vector<LocationCard> filler_library();

}  // namespace worldgen
