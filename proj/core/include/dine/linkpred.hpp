#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dine/embedding.hpp"
#include "dine/retrofit.hpp"
#include "dine/sgns.hpp"
#include "dine/splits.hpp"

namespace dine {

struct ScoredPair {
  int u = 0;
  int v = 0;
  double score = 0.0;
  bool positive = false;
};

using RankedPairs = std::vector<ScoredPair>;

// Scores every held-out pair with the average per-dimension product
// (1/D) sum_d u_d v_d over the full dimension set.
RankedPairs score_pairs(const EmbeddingMatrix& x, const EdgeSplit& split);

// Probability that a random positive outranks a random negative, ties
// counted half (Mann-Whitney). Throws on single-class input.
double roc_auc(const RankedPairs& pairs);

enum class LinkpredMethod { deepwalk, dine };

struct LinkpredConfig {
  LinkpredMethod method = LinkpredMethod::deepwalk;
  WalkConfig walk;
  SgnsConfig sgns;
  RetrofitConfig retrofit;  // used by the dine method
  double holdout_fraction = 0.1;
  int num_seeds = 5;
  std::uint64_t base_seed = 0;  // run i uses base_seed + i
};

struct LinkpredRun {
  std::uint64_t seed = 0;
  double auc = 0.0;
};

struct LinkpredSummary {
  std::string method;
  int dims = 0;
  std::vector<LinkpredRun> runs;
  double mean = 0.0;
  double stddev = 0.0;
};

// Per-seed protocol: split the graph, train on the training edges only,
// score the held-out pairs, aggregate mean and standard deviation.
LinkpredSummary linkpred_experiment(const Graph& g, const LinkpredConfig& cfg);

// JSON {method, dims, seeds: [{seed, auc}...], mean, std}.
void save_linkpred_json(const LinkpredSummary& summary,
                        const std::string& path);

}  // namespace dine
