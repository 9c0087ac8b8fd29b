#include "dine/interp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace dine {

std::pair<double, double> precision_recall(const std::vector<Edge>& subgraph,
                                           const std::vector<Edge>& part) {
  if (subgraph.empty())
    throw std::invalid_argument("precision undefined for an empty subgraph");
  if (part.empty())
    throw std::invalid_argument("recall undefined for an empty part");
  std::unordered_set<std::uint64_t> part_keys;
  part_keys.reserve(part.size() * 2);
  for (const auto& e : part) part_keys.insert(edge_key(e));
  std::size_t overlap = 0;
  for (const auto& e : subgraph) overlap += part_keys.count(edge_key(e));
  return {static_cast<double>(overlap) / subgraph.size(),
          static_cast<double>(overlap) / part.size()};
}

std::pair<double, int> community_score(const ExplanationSubgraph& e_d,
                                       const EdgePartition& partition) {
  if (!e_d.active()) return {0.0, -1};
  double best_f1 = -1.0;
  int best_part = -1;
  for (int i = 0; i < partition.num_parts(); ++i) {
    const auto [precision, recall] =
        precision_recall(e_d.edges, partition.parts[i]);
    const double f1 = precision + recall > 0.0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    if (f1 > best_f1) {
      best_f1 = f1;
      best_part = i;
    }
  }
  return {best_f1, best_part};
}

double sparsity_score(std::size_t subgraph_size, std::size_t total_edges) {
  if (total_edges < 2)
    throw std::invalid_argument("sparsity needs at least 2 edges");
  if (subgraph_size == 0) return 0.0;
  return std::log(static_cast<double>(subgraph_size)) /
         std::log(static_cast<double>(total_edges));
}

std::vector<int> effective_dimensions(
    const std::vector<ExplanationSubgraph>& subgraphs, std::size_t total_edges,
    double threshold, EffectiveRanking ranking,
    const std::vector<double>* scores) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("coverage threshold must lie in (0,1]");
  if (ranking == EffectiveRanking::score &&
      (scores == nullptr || scores->size() != subgraphs.size()))
    throw std::invalid_argument("score ranking needs one score per dimension");

  std::vector<int> order;
  for (std::size_t i = 0; i < subgraphs.size(); ++i)
    if (subgraphs[i].active()) order.push_back(static_cast<int>(i));

  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ranking == EffectiveRanking::score) {
      if ((*scores)[a] != (*scores)[b]) return (*scores)[a] > (*scores)[b];
    } else if (subgraphs[a].size() != subgraphs[b].size()) {
      return subgraphs[a].size() > subgraphs[b].size();
    }
    return subgraphs[a].dim < subgraphs[b].dim;
  });

  const double target =
      threshold * static_cast<double>(total_edges) - 1e-9;
  std::unordered_set<std::uint64_t> covered;
  std::vector<int> selected;
  for (int idx : order) {
    selected.push_back(subgraphs[idx].dim);
    for (const auto& e : subgraphs[idx].edges) covered.insert(edge_key(e));
    if (static_cast<double>(covered.size()) >= target) return selected;
  }
  return selected;  // coverage unreachable: every active dimension
}

InterpretabilityReport interpretability_report(const Graph& g,
                                               const EmbeddingMatrix& x,
                                               const EdgePartition& partition,
                                               double threshold,
                                               EffectiveRanking ranking) {
  const UtilityTable table = utility_table(g, x, ScoringKind::marginal);
  const auto subgraphs = explanation_subgraphs(table);
  const std::size_t total_edges = g.edges.size();

  InterpretabilityReport report;
  report.per_dim.reserve(subgraphs.size());
  std::vector<double> com_scores(subgraphs.size(), 0.0);
  for (const auto& sg : subgraphs) {
    DimensionScore score;
    score.dim = sg.dim;
    score.subgraph_size = sg.size();
    std::tie(score.i_com, score.best_part) = community_score(sg, partition);
    score.i_sp = sparsity_score(sg.size(), total_edges);
    com_scores[sg.dim] = score.i_com;
    report.per_dim.push_back(score);
  }

  report.effective_dims = effective_dimensions(
      subgraphs, total_edges, threshold, ranking,
      ranking == EffectiveRanking::score ? &com_scores : nullptr);

  std::unordered_set<std::uint64_t> covered;
  for (int d : report.effective_dims)
    for (const auto& e : subgraphs[d].edges) covered.insert(edge_key(e));
  report.coverage = total_edges == 0
                        ? 0.0
                        : static_cast<double>(covered.size()) / total_edges;

  auto mean_over = [&](auto&& proj, const std::vector<int>& dims) {
    if (dims.empty()) return 0.0;
    double sum = 0.0;
    for (int d : dims) sum += proj(report.per_dim[d]);
    return sum / dims.size();
  };
  std::vector<int> all_dims(report.per_dim.size());
  for (std::size_t i = 0; i < all_dims.size(); ++i)
    all_dims[i] = static_cast<int>(i);

  report.i_com_eff = mean_over([](const DimensionScore& s) { return s.i_com; },
                               report.effective_dims);
  report.i_sp_eff = mean_over([](const DimensionScore& s) { return s.i_sp; },
                              report.effective_dims);
  report.i_com_global = mean_over(
      [](const DimensionScore& s) { return s.i_com; }, all_dims);
  report.i_sp_global =
      mean_over([](const DimensionScore& s) { return s.i_sp; }, all_dims);
  return report;
}

void save_report_json(const InterpretabilityReport& report,
                      const std::string& path) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& s : report.per_dim) {
    nlohmann::json d{{"dim", s.dim},
                     {"i_com", s.i_com},
                     {"i_sp", s.i_sp},
                     {"size", s.subgraph_size}};
    if (s.best_part >= 0)
      d["best_part"] = s.best_part;
    else
      d["best_part"] = nullptr;
    dims.push_back(std::move(d));
  }
  nlohmann::json j{{"dims", std::move(dims)},
                   {"d_eff", report.effective_dims},
                   {"coverage", report.coverage},
                   {"i_com_eff", report.i_com_eff},
                   {"i_sp_eff", report.i_sp_eff},
                   {"i_com_global", report.i_com_global},
                   {"i_sp_global", report.i_sp_global}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace dine
