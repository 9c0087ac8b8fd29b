#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dine/attribution.hpp"
#include "dine/graph.hpp"

namespace dine {

// Per-dimension interpretability scores.
struct DimensionScore {
  int dim = 0;
  double i_com = 0.0;  // best F1 against any ground-truth edge part
  int best_part = -1;  // -1 when the subgraph is empty
  double i_sp = 0.0;   // normalized entropy, log|E_d| / log|E|
  std::size_t subgraph_size = 0;

  bool active() const { return subgraph_size > 0; }
};

// precision = |E_d n part| / |E_d|, recall = |E_d n part| / |part|.
// Throws when either set is empty.
std::pair<double, double> precision_recall(const std::vector<Edge>& subgraph,
                                           const std::vector<Edge>& part);

// Max F1 over all parts plus the argmax part id; (0, -1) for an empty
// subgraph. Ties resolved toward the lowest part id.
std::pair<double, int> community_score(const ExplanationSubgraph& e_d,
                                       const EdgePartition& partition);

// log(|E_d|) / log(|E|); 0 for an empty subgraph. Requires |E| >= 2.
double sparsity_score(std::size_t subgraph_size, std::size_t total_edges);

enum class EffectiveRanking { coverage, score };

// Greedy selection in descending |E_d| order (ties by ascending dim id)
// until the union covers threshold * |E|; all active dimensions when the
// coverage is unreachable. The score ranking orders by a caller-provided
// per-dimension score instead.
std::vector<int> effective_dimensions(
    const std::vector<ExplanationSubgraph>& subgraphs, std::size_t total_edges,
    double threshold = 0.9,
    EffectiveRanking ranking = EffectiveRanking::coverage,
    const std::vector<double>* scores = nullptr);

struct InterpretabilityReport {
  std::vector<DimensionScore> per_dim;
  std::vector<int> effective_dims;
  double coverage = 0.0;  // fraction of E covered by the effective union
  double i_com_eff = 0.0;
  double i_sp_eff = 0.0;
  double i_com_global = 0.0;  // all-dimension means
  double i_sp_global = 0.0;
};

// Full pipeline: utility table -> explanation subgraphs -> per-dimension
// scores -> effective dimensions -> averages.
InterpretabilityReport interpretability_report(
    const Graph& g, const EmbeddingMatrix& x, const EdgePartition& partition,
    double threshold = 0.9,
    EffectiveRanking ranking = EffectiveRanking::coverage);

void save_report_json(const InterpretabilityReport& report,
                      const std::string& path);

}  // namespace dine
