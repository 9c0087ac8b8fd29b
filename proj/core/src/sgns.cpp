#include "dine/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "dine/random.hpp"

namespace dine {

std::vector<std::vector<int>> sample_walks(const Graph& g,
                                           const WalkConfig& cfg) {
  if (cfg.walk_length < 1 || cfg.num_walks < 1)
    throw std::invalid_argument("walk parameters must be positive");

  std::vector<std::vector<int>> walks;
  walks.reserve(static_cast<std::size_t>(cfg.num_walks) * g.num_nodes);

  std::vector<int> starts(g.num_nodes);
  std::iota(starts.begin(), starts.end(), 0);

  for (int round = 0; round < cfg.num_walks; ++round) {
    Rng order_rng(derive_seed(cfg.seed, "walk-order", round));
    order_rng.shuffle(starts);
    for (int slot = 0; slot < g.num_nodes; ++slot) {
      // Every walk draws from its own stream, so the output is identical
      // whether slots run sequentially or in parallel.
      Rng walk_rng(derive_seed(
          cfg.seed, "walk-steps",
          static_cast<std::uint64_t>(round) * g.num_nodes + slot));
      std::vector<int> walk;
      walk.reserve(cfg.walk_length);
      int current = starts[slot];
      walk.push_back(current);
      for (int step = 1; step < cfg.walk_length; ++step) {
        const auto& nbrs = g.adjacency[current];
        if (nbrs.empty()) break;
        current = nbrs[walk_rng.uniform_int(nbrs.size())];
        walk.push_back(current);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

EmbeddingMatrix SgnsModel::embedding(const Graph& g) const {
  EmbeddingMatrix x;
  x.values = input;
  x.ids.resize(g.num_nodes);
  for (int v = 0; v < g.num_nodes; ++v) x.ids[v] = g.label_of(v);
  return x;
}

EmbeddingMatrix SgnsModel::embedding() const {
  EmbeddingMatrix x;
  x.values = input;
  return x;
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Cumulative unigram^{3/4} distribution over nodes, sampled by binary
// search; exact and deterministic.
class NegativeSampler {
 public:
  NegativeSampler(const std::vector<std::vector<int>>& walks, int num_nodes) {
    std::vector<double> weight(num_nodes, 0.0);
    for (const auto& walk : walks)
      for (int node : walk) weight[node] += 1.0;
    cumulative_.resize(num_nodes);
    double total = 0.0;
    for (int v = 0; v < num_nodes; ++v) {
      total += std::pow(weight[v], 0.75);
      cumulative_[v] = total;
    }
    if (total <= 0.0)
      throw std::invalid_argument("walks contain no nodes");
  }

  int sample(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    return static_cast<int>(
        std::lower_bound(cumulative_.begin(), cumulative_.end(), u) -
        cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

SgnsModel train_sgns(const std::vector<std::vector<int>>& walks,
                     int num_nodes, int window, const SgnsConfig& cfg) {
  if (walks.empty()) throw std::invalid_argument("no walks to train on");
  if (cfg.dim < 1) throw std::invalid_argument("embedding dim must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (!(cfg.min_lr > 0.0) || cfg.min_lr > cfg.initial_lr)
    throw std::invalid_argument("need 0 < min_lr <= initial_lr");
  if (cfg.dim >= num_nodes)
    std::cerr << "warning: embedding dim " << cfg.dim
              << " >= node count " << num_nodes << "\n";

  const int dim = cfg.dim;
  SgnsModel model;
  Rng init_rng(derive_seed(cfg.seed, "sgns-init"));
  model.input.resize(dim, num_nodes);
  for (int v = 0; v < num_nodes; ++v)
    for (int d = 0; d < dim; ++d)
      model.input(d, v) = (init_rng.uniform() - 0.5) / dim;
  model.context = Eigen::MatrixXd::Zero(dim, num_nodes);
  if (cfg.epochs == 0) return model;

  NegativeSampler sampler(walks, num_nodes);

  // Total positive pairs over all epochs, for the linear lr schedule.
  std::uint64_t pairs_per_epoch = 0;
  for (const auto& walk : walks) {
    const int len = static_cast<int>(walk.size());
    for (int i = 0; i < len; ++i) {
      const int lo = std::max(0, i - window);
      const int hi = std::min(len - 1, i + window);
      pairs_per_epoch += static_cast<std::uint64_t>(hi - lo);
    }
  }
  const double total_pairs =
      static_cast<double>(pairs_per_epoch) * cfg.epochs;

  Rng train_rng(derive_seed(cfg.seed, "sgns-train"));
  Eigen::VectorXd center_grad(dim);
  std::uint64_t processed = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& walk : walks) {
      const int len = static_cast<int>(walk.size());
      for (int i = 0; i < len; ++i) {
        const int center = walk[i];
        const int lo = std::max(0, i - window);
        const int hi = std::min(len - 1, i + window);
        for (int j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const int pos_context = walk[j];
          const double lr = std::max(
              cfg.min_lr,
              cfg.initial_lr - (cfg.initial_lr - cfg.min_lr) *
                                   (static_cast<double>(processed) /
                                    total_pairs));
          ++processed;

          auto in = model.input.col(center);
          center_grad.setZero();
          for (int k = 0; k <= cfg.negatives_per_positive; ++k) {
            int target;
            double label;
            if (k == 0) {
              target = pos_context;
              label = 1.0;
            } else {
              target = sampler.sample(train_rng);
              if (target == pos_context) continue;
              label = 0.0;
            }
            auto out = model.context.col(target);
            const double g = (label - sigmoid(in.dot(out))) * lr;
            center_grad += g * out;
            out += g * in;
          }
          in += center_grad;
        }
      }
    }
  }
  return model;
}

double sgns_objective(const SgnsModel& model,
                      const std::vector<std::pair<int, int>>& positives,
                      const std::vector<std::pair<int, int>>& negatives) {
  if (positives.empty() && negatives.empty())
    throw std::invalid_argument("empty probe batch");
  double loss = 0.0;
  for (const auto& [c, o] : positives)
    loss += -std::log(sigmoid(model.input.col(c).dot(model.context.col(o))));
  for (const auto& [c, o] : negatives)
    loss += -std::log(sigmoid(-model.input.col(c).dot(model.context.col(o))));
  return loss / static_cast<double>(positives.size() + negatives.size());
}

EmbeddingMatrix deepwalk(const Graph& g, const WalkConfig& walk_cfg,
                         const SgnsConfig& sgns_cfg) {
  const auto walks = sample_walks(g, walk_cfg);
  const SgnsModel model =
      train_sgns(walks, g.num_nodes, walk_cfg.window, sgns_cfg);
  return model.embedding(g);
}

}  // namespace dine
