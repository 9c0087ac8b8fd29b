#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "dine/embedding.hpp"
#include "dine/graph.hpp"

namespace dine {

struct WalkConfig {
  int walk_length = 10;  // nodes per walk, start included
  int num_walks = 20;    // walks per start node
  int window = 5;        // co-occurrence radius
  std::uint64_t seed = 0;
};

// num_walks uniform random walks per start node. Start order is shuffled
// per round by a seeded stream and each walk draws from its own derived
// stream, so results do not depend on scheduling. Nodes without neighbors
// yield length-1 walks.
std::vector<std::vector<int>> sample_walks(const Graph& g,
                                           const WalkConfig& cfg);

struct SgnsConfig {
  int dim = 128;
  int epochs = 5;
  int negatives_per_positive = 5;
  double initial_lr = 0.025;
  double min_lr = 1e-4;
  std::uint64_t seed = 0;
};

// Input and context vectors of a skip-gram negative-sampling model.
struct SgnsModel {
  Eigen::MatrixXd input;    // D x V
  Eigen::MatrixXd context;  // D x V

  // The embedding handed downstream is the input-side matrix.
  EmbeddingMatrix embedding(const Graph& g) const;
  EmbeddingMatrix embedding() const;
};

// Sequential deterministic SGNS over walk co-occurrences: positives from a
// fixed window, negatives from the unigram^{3/4} corpus distribution,
// linear lr decay. epochs == 0 returns the seeded initialization.
SgnsModel train_sgns(const std::vector<std::vector<int>>& walks,
                     int num_nodes, int window, const SgnsConfig& cfg);

// Mean SGNS objective -log s(in.out) / -log s(-in.out) over a probe batch;
// used to track training progress.
double sgns_objective(const SgnsModel& model,
                      const std::vector<std::pair<int, int>>& positives,
                      const std::vector<std::pair<int, int>>& negatives);

// sample_walks + train_sgns with substream seeds derived from cfg seeds.
EmbeddingMatrix deepwalk(const Graph& g, const WalkConfig& walk_cfg,
                         const SgnsConfig& sgns_cfg);

}  // namespace dine
