#include "dine/linkpred.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dine/random.hpp"

namespace dine {

RankedPairs score_pairs(const EmbeddingMatrix& x, const EdgeSplit& split) {
  const int n = split.train_graph.num_nodes;
  if (x.num_nodes() != n)
    throw std::invalid_argument("embedding does not cover the split's nodes");
  const double dims = static_cast<double>(x.dim());

  RankedPairs pairs;
  pairs.reserve(split.positive_test.size() + split.negative_test.size());
  auto push = [&](const Edge& e, bool positive) {
    if (e.first >= n || e.second >= n)
      throw std::invalid_argument("pair endpoint outside the embedding");
    pairs.push_back({e.first, e.second,
                     x.values.col(e.first).dot(x.values.col(e.second)) / dims,
                     positive});
  };
  for (const auto& e : split.positive_test) push(e, true);
  for (const auto& e : split.negative_test) push(e, false);
  return pairs;
}

double roc_auc(const RankedPairs& pairs) {
  std::size_t num_pos = 0, num_neg = 0;
  for (const auto& p : pairs) (p.positive ? num_pos : num_neg)++;
  if (num_pos == 0 || num_neg == 0)
    throw std::invalid_argument("ROC-AUC needs both classes");

  // Mann-Whitney via average ranks; ties get half credit.
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].score < pairs[b].score;
  });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           pairs[order[j + 1]].score == pairs[order[i]].score)
      ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t)
      if (pairs[order[t]].positive) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  const double p = static_cast<double>(num_pos);
  const double n = static_cast<double>(num_neg);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

LinkpredSummary linkpred_experiment(const Graph& g,
                                    const LinkpredConfig& cfg) {
  if (cfg.num_seeds < 1)
    throw std::invalid_argument("need at least one run");

  LinkpredSummary summary;
  summary.method =
      cfg.method == LinkpredMethod::deepwalk ? "deepwalk" : "dine";
  summary.dims = cfg.method == LinkpredMethod::deepwalk
                     ? cfg.sgns.dim
                     : cfg.retrofit.hidden_dim;

  for (int i = 0; i < cfg.num_seeds; ++i) {
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(i);
    const EdgeSplit split =
        split_edges(g, cfg.holdout_fraction, derive_seed(seed, "split"));

    WalkConfig walk_cfg = cfg.walk;
    walk_cfg.seed = derive_seed(seed, "walks");
    SgnsConfig sgns_cfg = cfg.sgns;
    sgns_cfg.seed = derive_seed(seed, "sgns");
    EmbeddingMatrix emb = deepwalk(split.train_graph, walk_cfg, sgns_cfg);

    if (cfg.method == LinkpredMethod::dine) {
      RetrofitConfig retro_cfg = cfg.retrofit;
      retro_cfg.seed = derive_seed(seed, "retrofit");
      emb = train_retrofit(emb, retro_cfg).hidden;
    }
    summary.runs.push_back({seed, roc_auc(score_pairs(emb, split))});
  }

  double mean = 0.0;
  for (const auto& run : summary.runs) mean += run.auc;
  mean /= summary.runs.size();
  double var = 0.0;
  for (const auto& run : summary.runs)
    var += (run.auc - mean) * (run.auc - mean);
  summary.mean = mean;
  summary.stddev = std::sqrt(var / summary.runs.size());
  return summary;
}

void save_linkpred_json(const LinkpredSummary& summary,
                        const std::string& path) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& run : summary.runs)
    seeds.push_back({{"seed", run.seed}, {"auc", run.auc}});
  nlohmann::json j{{"method", summary.method},
                   {"dims", summary.dims},
                   {"seeds", std::move(seeds)},
                   {"mean", summary.mean},
                   {"std", summary.stddev}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write summary: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace dine
