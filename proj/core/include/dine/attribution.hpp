#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "dine/embedding.hpp"
#include "dine/graph.hpp"

namespace dine {

enum class ScoringKind { marginal, shapley };

// Exact Shapley enumeration is guarded to this many dimensions.
inline constexpr int kShapleyMaxDims = 20;

// Average per-dimension product over a dimension subset:
// (1/|S|) * sum_{d in S} u_d * v_d. Throws on an empty subset.
double delta_score(std::span<const double> u, std::span<const double> v,
                   std::span<const int> subset);

// Per-dimension marginal utility of edge reconstruction: the change in the
// average score when dimension d is dropped from the full set. Closed form
// mu_d = (D*u_d*v_d - S) / (D*(D-1)) with S the full dot product. Requires
// D >= 2.
Eigen::VectorXd marginal_utility(std::span<const double> u,
                                 std::span<const double> v);

// Exact Shapley value of each dimension for the average-score game,
// enumerating every coalition with the empty-coalition payoff fixed to 0.
// Requires D <= kShapleyMaxDims.
Eigen::VectorXd shapley_exact(std::span<const double> u,
                              std::span<const double> v);

// Per-edge attribution vectors for every edge of the graph.
struct UtilityTable {
  ScoringKind kind = ScoringKind::marginal;
  std::vector<Edge> edges;
  Eigen::MatrixXd values;  // num_edges x D, row per edge

  int num_dims() const { return static_cast<int>(values.cols()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
};

// Computed edge-parallel into preallocated rows; bit-identical to the
// sequential evaluation for any worker count.
UtilityTable utility_table(const Graph& g, const EmbeddingMatrix& x,
                           ScoringKind kind);

// Edges with strictly positive utility for one dimension.
struct ExplanationSubgraph {
  int dim = 0;
  std::vector<Edge> edges;
  std::vector<double> weights;

  bool active() const { return !edges.empty(); }
  std::size_t size() const { return edges.size(); }
};

// One subgraph per dimension; dimensions with no positive-utility edge come
// back empty (kept, flagged inactive via active()).
std::vector<ExplanationSubgraph> explanation_subgraphs(const UtilityTable& t);

// Negative-utility counterpart (strictly negative entries, weights stored
// as their absolute magnitude). Unscored by the metrics.
std::vector<ExplanationSubgraph> negative_subgraphs(const UtilityTable& t);

// TSV rows "dim u v mu mu_norm" with mu_norm min-max normalized to [0,1]
// over the whole table (or per dimension when per_dimension is set); a
// degenerate range normalizes to 0.
void export_saliency(const UtilityTable& t, const std::string& path,
                     bool per_dimension = false);

// JSON array of {dim, edges: [[u, v, mu], ...]}.
void save_subgraphs_json(const std::vector<ExplanationSubgraph>& subgraphs,
                         const std::string& path);

}  // namespace dine
