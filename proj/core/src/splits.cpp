#include "dine/splits.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dine/random.hpp"

namespace dine {

EdgeSplit split_edges(const Graph& g, double holdout_fraction,
                      std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw std::invalid_argument("holdout fraction must lie in (0,1)");
  const int m = g.num_edges();
  const int k = static_cast<int>(std::floor(holdout_fraction * m));
  if (m - k < 1)
    throw std::invalid_argument("holdout would empty the training edge set");

  Rng rng(seed);

  // Partial Fisher-Yates: the first k slots become the held-out positives.
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j =
        i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(m - i)));
    std::swap(order[i], order[j]);
  }

  std::unordered_set<std::uint64_t> held;
  EdgeSplit split;
  split.holdout_fraction = holdout_fraction;
  split.seed = seed;
  split.positive_test.reserve(k);
  for (int i = 0; i < k; ++i) {
    const Edge& e = g.edges[order[i]];
    split.positive_test.push_back(e);
    held.insert(edge_key(e));
  }

  std::vector<Edge> train_edges;
  train_edges.reserve(m - k);
  for (const auto& e : g.edges)
    if (!held.count(edge_key(e))) train_edges.push_back(e);
  split.train_graph = make_graph(g.num_nodes, train_edges, g.node_labels);

  // Uniform node pairs rejected against the ORIGINAL edge set.
  std::unordered_set<std::uint64_t> chosen;
  const long long max_attempts = 1000LL * k + 10000;
  long long attempts = 0;
  while (static_cast<int>(split.negative_test.size()) < k) {
    if (++attempts > max_attempts)
      throw std::runtime_error(
          "could not sample enough non-edges (graph too dense)");
    const int u = static_cast<int>(rng.uniform_int(g.num_nodes));
    const int v = static_cast<int>(rng.uniform_int(g.num_nodes));
    if (u == v) continue;
    const std::uint64_t key = edge_key(u, v);
    if (g.has_edge(u, v) || chosen.count(key)) continue;
    chosen.insert(key);
    split.negative_test.push_back(make_edge(u, v));
  }
  return split;
}

void save_split_manifest(const EdgeSplit& split, const std::string& path) {
  nlohmann::json j;
  j["holdout_fraction"] = split.holdout_fraction;
  j["seed"] = split.seed;
  auto pairs = [](const std::vector<Edge>& edges) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [u, v] : edges) arr.push_back({u, v});
    return arr;
  };
  j["positive_test"] = pairs(split.positive_test);
  j["negative_test"] = pairs(split.negative_test);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write split manifest: " + path);
  out << j.dump(2) << '\n';
}

EdgeSplit load_split_manifest(const Graph& original, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open split manifest: " + path);
  nlohmann::json j;
  in >> j;

  EdgeSplit split;
  split.holdout_fraction = j.at("holdout_fraction").get<double>();
  split.seed = j.at("seed").get<std::uint64_t>();
  auto pairs = [](const nlohmann::json& arr) {
    std::vector<Edge> edges;
    for (const auto& e : arr)
      edges.push_back(make_edge(e.at(0).get<int>(), e.at(1).get<int>()));
    return edges;
  };
  split.positive_test = pairs(j.at("positive_test"));
  split.negative_test = pairs(j.at("negative_test"));

  std::unordered_set<std::uint64_t> held;
  for (const auto& e : split.positive_test) held.insert(edge_key(e));
  std::vector<Edge> train_edges;
  for (const auto& e : original.edges)
    if (!held.count(edge_key(e))) train_edges.push_back(e);
  split.train_graph =
      make_graph(original.num_nodes, train_edges, original.node_labels);
  return split;
}

}  // namespace dine
