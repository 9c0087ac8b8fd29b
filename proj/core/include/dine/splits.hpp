#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dine/graph.hpp"

namespace dine {

// Train/test split for link prediction. positive_test edges are removed
// from the training graph; negative_test pairs are absent from the
// ORIGINAL edge set, not merely from the training edges.
struct EdgeSplit {
  Graph train_graph;
  std::vector<Edge> positive_test;
  std::vector<Edge> negative_test;
  double holdout_fraction = 0.1;
  std::uint64_t seed = 0;
};

// Moves floor(holdout_fraction * |E|) uniformly chosen edges into
// positive_test and samples as many uniform non-edges as negative_test.
// Deterministic per seed. Throws when the training edge set would end up
// empty or when the graph is too dense to sample the negatives.
EdgeSplit split_edges(const Graph& g, double holdout_fraction,
                      std::uint64_t seed);

// JSON object {holdout_fraction, seed, positive_test, negative_test}.
void save_split_manifest(const EdgeSplit& split, const std::string& path);
EdgeSplit load_split_manifest(const Graph& original, const std::string& path);

}  // namespace dine
