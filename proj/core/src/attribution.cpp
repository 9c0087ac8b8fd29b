#include "dine/attribution.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dine/parallel.hpp"

namespace dine {

double delta_score(std::span<const double> u, std::span<const double> v,
                   std::span<const int> subset) {
  if (u.size() != v.size())
    throw std::invalid_argument("vector lengths differ");
  if (subset.empty())
    throw std::invalid_argument("dimension subset must be nonempty");
  double sum = 0.0;
  for (int d : subset) {
    if (d < 0 || static_cast<std::size_t>(d) >= u.size())
      throw std::invalid_argument("dimension index out of range");
    sum += u[d] * v[d];
  }
  return sum / static_cast<double>(subset.size());
}

Eigen::VectorXd marginal_utility(std::span<const double> u,
                                 std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("vector lengths differ");
  const int dims = static_cast<int>(u.size());
  if (dims < 2)
    throw std::invalid_argument(
        "marginal utility needs at least 2 dimensions");
  double total = 0.0;
  for (int d = 0; d < dims; ++d) total += u[d] * v[d];

  Eigen::VectorXd mu(dims);
  const double denom = static_cast<double>(dims) * (dims - 1);
  for (int d = 0; d < dims; ++d)
    mu[d] = (dims * (u[d] * v[d]) - total) / denom;
  return mu;
}

Eigen::VectorXd shapley_exact(std::span<const double> u,
                              std::span<const double> v) {
  if (u.size() != v.size())
    throw std::invalid_argument("vector lengths differ");
  const int dims = static_cast<int>(u.size());
  if (dims < 2)
    throw std::invalid_argument("shapley needs at least 2 dimensions");
  if (dims > kShapleyMaxDims)
    throw std::invalid_argument(
        "exact enumeration is limited to " +
        std::to_string(kShapleyMaxDims) +
        " dimensions; use marginal_utility for larger embeddings");

  std::vector<double> products(dims);
  for (int d = 0; d < dims; ++d) products[d] = u[d] * v[d];

  // Subset-sum table over all coalitions: sum[m] = sum of products in m.
  const std::uint32_t full = 1u << dims;
  std::vector<double> subset_sum(full, 0.0);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int low = std::countr_zero(mask);
    subset_sum[mask] = subset_sum[mask & (mask - 1)] + products[low];
  }

  // 1 / binom(D-1, k) for k = 0..D-1.
  std::vector<double> inv_binom(dims);
  double binom = 1.0;
  for (int k = 0; k < dims; ++k) {
    inv_binom[k] = 1.0 / binom;
    binom = binom * (dims - 1 - k) / (k + 1);
  }

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(dims);
  const double inv_dims = 1.0 / dims;
  for (int d = 0; d < dims; ++d) {
    const std::uint32_t bit = 1u << d;
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (mask & bit) continue;
      const int k = std::popcount(mask);
      // Empty-coalition payoff is fixed to 0.
      const double without = k > 0 ? subset_sum[mask] / k : 0.0;
      const double with = (subset_sum[mask] + products[d]) / (k + 1);
      acc += inv_binom[k] * (with - without);
    }
    phi[d] = acc * inv_dims;
  }
  return phi;
}

UtilityTable utility_table(const Graph& g, const EmbeddingMatrix& x,
                           ScoringKind kind) {
  if (x.num_nodes() != g.num_nodes)
    throw std::invalid_argument("embedding covers " +
                                std::to_string(x.num_nodes()) +
                                " nodes, graph has " +
                                std::to_string(g.num_nodes));
  const int dims = x.dim();
  if (dims < 2)
    throw std::invalid_argument("attribution needs at least 2 dimensions");
  if (kind == ScoringKind::shapley && dims > kShapleyMaxDims)
    throw std::invalid_argument(
        "exact enumeration is limited to " +
        std::to_string(kShapleyMaxDims) +
        " dimensions; use the marginal scoring for larger embeddings");

  UtilityTable table;
  table.kind = kind;
  table.edges = g.edges;
  table.values.resize(g.num_edges(), dims);

  parallel_for(table.edges.size(), [&](std::size_t i) {
    const auto& [u, v] = table.edges[i];
    const std::span<const double> uv(x.values.col(u).data(), dims);
    const std::span<const double> vv(x.values.col(v).data(), dims);
    table.values.row(i) = (kind == ScoringKind::marginal
                               ? marginal_utility(uv, vv)
                               : shapley_exact(uv, vv))
                              .transpose();
  });
  return table;
}

namespace {

std::vector<ExplanationSubgraph> signed_subgraphs(const UtilityTable& t,
                                                  bool positive) {
  std::vector<ExplanationSubgraph> out(t.num_dims());
  for (int d = 0; d < t.num_dims(); ++d) out[d].dim = d;
  for (int i = 0; i < t.num_edges(); ++i) {
    for (int d = 0; d < t.num_dims(); ++d) {
      const double mu = t.values(i, d);
      if (positive ? mu > 0.0 : mu < 0.0) {
        out[d].edges.push_back(t.edges[i]);
        out[d].weights.push_back(positive ? mu : -mu);
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ExplanationSubgraph> explanation_subgraphs(const UtilityTable& t) {
  return signed_subgraphs(t, true);
}

std::vector<ExplanationSubgraph> negative_subgraphs(const UtilityTable& t) {
  return signed_subgraphs(t, false);
}

void export_saliency(const UtilityTable& t, const std::string& path,
                     bool per_dimension) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write saliency: " + path);

  auto norm_bounds = [](double lo, double hi) {
    // Degenerate range normalizes to 0.
    const double span = hi - lo;
    return span > 0.0 ? span : std::numeric_limits<double>::infinity();
  };

  double global_lo = 0.0, global_hi = 0.0, global_span = 1.0;
  if (t.num_edges() > 0) {
    global_lo = t.values.minCoeff();
    global_hi = t.values.maxCoeff();
    global_span = norm_bounds(global_lo, global_hi);
  }

  char buf[64];
  out << "dim\tu\tv\tmu\tmu_norm\n";
  for (int d = 0; d < t.num_dims(); ++d) {
    double lo = global_lo, span = global_span;
    if (per_dimension && t.num_edges() > 0) {
      lo = t.values.col(d).minCoeff();
      span = norm_bounds(lo, t.values.col(d).maxCoeff());
    }
    for (int i = 0; i < t.num_edges(); ++i) {
      const double mu = t.values(i, d);
      const double norm = (mu - lo) / span;
      std::snprintf(buf, sizeof(buf), "%.17g\t%.17g", mu, norm);
      out << d << '\t' << t.edges[i].first << '\t' << t.edges[i].second << '\t'
          << buf << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_subgraphs_json(const std::vector<ExplanationSubgraph>& subgraphs,
                         const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& sg : subgraphs) {
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t i = 0; i < sg.edges.size(); ++i)
      edges.push_back(
          {sg.edges[i].first, sg.edges[i].second, sg.weights[i]});
    arr.push_back({{"dim", sg.dim}, {"edges", std::move(edges)}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write subgraphs: " + path);
  out << arr.dump(2) << '\n';
}

}  // namespace dine
