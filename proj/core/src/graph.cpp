#include "dine/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "dine/random.hpp"

namespace dine {

bool Graph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes || u == v)
    return false;
  const auto& adj = adjacency[u].size() <= adjacency[v].size() ? adjacency[u]
                                                               : adjacency[v];
  const int other = adjacency[u].size() <= adjacency[v].size() ? v : u;
  return std::binary_search(adj.begin(), adj.end(), other);
}

std::string Graph::label_of(int v) const {
  if (!node_labels.empty()) return node_labels[v];
  return std::to_string(v);
}

Graph make_graph(int num_nodes, const std::vector<Edge>& edges,
                 std::vector<std::string> node_labels,
                 GraphBuildStats* stats) {
  if (num_nodes < 0) throw std::invalid_argument("negative node count");
  if (!node_labels.empty() &&
      static_cast<int>(node_labels.size()) != num_nodes)
    throw std::invalid_argument("node_labels size does not match num_nodes");

  Graph g;
  g.num_nodes = num_nodes;
  g.node_labels = std::move(node_labels);
  g.adjacency.resize(num_nodes);

  GraphBuildStats local;
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
      throw std::invalid_argument("edge endpoint out of range");
    if (a == b) {
      ++local.self_loops_dropped;
      continue;
    }
    const Edge e = make_edge(a, b);
    if (!seen.insert(edge_key(e)).second) {
      ++local.duplicates_merged;
      continue;
    }
    g.edges.push_back(e);
    g.adjacency[e.first].push_back(e.second);
    g.adjacency[e.second].push_back(e.first);
  }
  for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
  if (stats) *stats = local;
  return g;
}

Graph load_edge_list(const std::string& path, GraphBuildStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);

  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index_of;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& token) {
    auto [it, inserted] =
        index_of.emplace(token, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;  // blank line
    if (a[0] == '#') continue;
    if (!(ls >> b) || (ls >> extra)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected two whitespace-separated ids");
    }
    const int ia = intern(a);  // sequenced: ids get first-appearance order
    const int ib = intern(b);
    edges.emplace_back(ia, ib);
  }
  if (labels.empty())
    throw std::runtime_error("empty graph in edge list: " + path);
  const int num_nodes = static_cast<int>(labels.size());
  return make_graph(num_nodes, edges, std::move(labels), stats);
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (const auto& [u, v] : g.edges)
    out << g.label_of(u) << ' ' << g.label_of(v) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Graph largest_connected_component(const Graph& g) {
  if (g.num_nodes == 0) throw std::invalid_argument("empty graph");

  std::vector<int> component(g.num_nodes, -1);
  std::vector<int> sizes;
  for (int start = 0; start < g.num_nodes; ++start) {
    if (component[start] != -1) continue;
    const int id = static_cast<int>(sizes.size());
    int size = 0;
    std::queue<int> queue;
    queue.push(start);
    component[start] = id;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      ++size;
      for (int w : g.adjacency[v]) {
        if (component[w] == -1) {
          component[w] = id;
          queue.push(w);
        }
      }
    }
    sizes.push_back(size);
  }

  // Components are discovered in increasing order of their smallest original
  // index, so the first maximum realizes the tie-break.
  const int best =
      static_cast<int>(std::max_element(sizes.begin(), sizes.end()) -
                       sizes.begin());

  std::vector<int> new_index(g.num_nodes, -1);
  std::vector<std::string> labels;
  int next = 0;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (component[v] != best) continue;
    new_index[v] = next++;
    labels.push_back(g.label_of(v));
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges)
    if (component[u] == best && component[v] == best)
      edges.emplace_back(new_index[u], new_index[v]);
  return make_graph(next, edges, std::move(labels));
}

CommunityAssignment normalize_communities(std::vector<int> node_to_community) {
  std::unordered_map<int, int> remap;
  for (int& c : node_to_community) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  CommunityAssignment out;
  out.node_to_community = std::move(node_to_community);
  out.num_communities = static_cast<int>(remap.size());
  return out;
}

void save_communities(const Graph& g, const CommunityAssignment& c,
                      const std::string& path) {
  if (static_cast<int>(c.node_to_community.size()) != g.num_nodes)
    throw std::invalid_argument("assignment does not cover the graph");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write communities: " + path);
  for (int v = 0; v < g.num_nodes; ++v)
    out << g.label_of(v) << '\t' << c.node_to_community[v] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

CommunityAssignment load_communities(const Graph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open communities: " + path);
  std::unordered_map<std::string, int> index_of;
  for (int v = 0; v < g.num_nodes; ++v) index_of.emplace(g.label_of(v), v);

  std::vector<int> assignment(g.num_nodes, -1);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string node;
    int community;
    if (!(ls >> node)) continue;
    if (node[0] == '#') continue;
    if (!(ls >> community))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected node and community id");
    auto it = index_of.find(node);
    if (it == index_of.end())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unknown node '" + node + "'");
    assignment[it->second] = community;
  }
  for (int v = 0; v < g.num_nodes; ++v)
    if (assignment[v] == -1)
      throw std::runtime_error(path + ": node '" + g.label_of(v) +
                               "' has no community");
  return normalize_communities(std::move(assignment));
}

std::pair<Graph, CommunityAssignment> generate_sbm(const SbmConfig& cfg) {
  if (cfg.num_blocks < 1 || cfg.block_size < 1)
    throw std::invalid_argument("block counts must be positive");
  if (cfg.intra_prob < 0.0 || cfg.intra_prob > 1.0 || cfg.inter_prob < 0.0 ||
      cfg.inter_prob > 1.0)
    throw std::invalid_argument("probabilities must lie in [0,1]");

  const int n = cfg.num_blocks * cfg.block_size;
  std::vector<int> block(n);
  for (int v = 0; v < n; ++v) block[v] = v / cfg.block_size;

  Rng rng(cfg.seed);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double p = block[u] == block[v] ? cfg.intra_prob : cfg.inter_prob;
      if (rng.uniform() < p) edges.emplace_back(u, v);
    }
  }
  CommunityAssignment communities;
  communities.node_to_community = std::move(block);
  communities.num_communities = cfg.num_blocks;
  return {make_graph(n, edges), std::move(communities)};
}

double modularity(const Graph& g, const CommunityAssignment& c) {
  if (static_cast<int>(c.node_to_community.size()) != g.num_nodes)
    throw std::invalid_argument("assignment does not cover the graph");
  const double m = g.num_edges();
  if (m == 0) return 0.0;

  std::vector<double> internal(c.num_communities, 0.0);
  std::vector<double> degree_sum(c.num_communities, 0.0);
  for (const auto& [u, v] : g.edges)
    if (c.node_to_community[u] == c.node_to_community[v])
      internal[c.node_to_community[u]] += 1.0;
  for (int v = 0; v < g.num_nodes; ++v)
    degree_sum[c.node_to_community[v]] += g.degree(v);

  double q = 0.0;
  for (int i = 0; i < c.num_communities; ++i) {
    const double a = degree_sum[i] / (2.0 * m);
    q += internal[i] / m - a * a;
  }
  return q;
}

namespace {

// Weighted multigraph for the aggregation levels: symmetric neighbor lists
// plus per-node self-loop weight (collapsed intra-community edges).
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_weight;
  std::vector<double> strength;  // sum of incident weights, self loops twice
  double two_m = 0.0;

  int size() const { return static_cast<int>(adj.size()); }
};

LevelGraph level_from(const Graph& g) {
  LevelGraph lg;
  lg.adj.resize(g.num_nodes);
  lg.self_weight.assign(g.num_nodes, 0.0);
  lg.strength.assign(g.num_nodes, 0.0);
  for (const auto& [u, v] : g.edges) {
    lg.adj[u].emplace_back(v, 1.0);
    lg.adj[v].emplace_back(u, 1.0);
    lg.strength[u] += 1.0;
    lg.strength[v] += 1.0;
  }
  lg.two_m = 2.0 * g.num_edges();
  return lg;
}

double level_modularity(const LevelGraph& lg, const std::vector<int>& comm,
                        int num_comms) {
  std::vector<double> in(num_comms, 0.0), tot(num_comms, 0.0);
  for (int v = 0; v < lg.size(); ++v) {
    tot[comm[v]] += lg.strength[v];
    in[comm[v]] += 2.0 * lg.self_weight[v];
    for (const auto& [w, weight] : lg.adj[v])
      if (comm[w] == comm[v]) in[comm[v]] += weight;
  }
  double q = 0.0;
  for (int i = 0; i < num_comms; ++i) {
    const double a = tot[i] / lg.two_m;
    q += in[i] / lg.two_m - a * a;
  }
  return q;
}

// One local-move phase. Returns true when at least one node moved.
bool local_moves(const LevelGraph& lg, std::vector<int>& comm, Rng& rng) {
  const int n = lg.size();
  std::vector<double> tot(n, 0.0);
  for (int v = 0; v < n; ++v) tot[comm[v]] += lg.strength[v];

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<double> weight_to(n, 0.0);
  bool any_move = false;
  bool moved_this_pass = true;
  while (moved_this_pass) {
    moved_this_pass = false;
    for (int v : order) {
      const int old_comm = comm[v];
      std::vector<int> candidates;
      for (const auto& [w, weight] : lg.adj[v]) {
        const int c = comm[w];
        if (weight_to[c] == 0.0 && c != old_comm) candidates.push_back(c);
        weight_to[c] += weight;
      }
      tot[old_comm] -= lg.strength[v];

      const double base =
          weight_to[old_comm] - tot[old_comm] * lg.strength[v] / lg.two_m;
      int target = old_comm;
      // First candidate (in adjacency encounter order) whose gain over
      // staying is positive.
      for (int c : candidates) {
        const double gain =
            weight_to[c] - tot[c] * lg.strength[v] / lg.two_m;
        if (gain > base + 1e-12) {
          target = c;
          break;
        }
      }
      tot[target] += lg.strength[v];
      if (target != old_comm) {
        comm[v] = target;
        moved_this_pass = true;
        any_move = true;
      }

      weight_to[old_comm] = 0.0;
      for (const auto& [w, weight] : lg.adj[v]) weight_to[comm[w]] = 0.0;
    }
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& comm,
                     int num_comms) {
  LevelGraph out;
  out.adj.resize(num_comms);
  out.self_weight.assign(num_comms, 0.0);
  out.strength.assign(num_comms, 0.0);
  out.two_m = lg.two_m;

  std::vector<std::unordered_map<int, double>> acc(num_comms);
  for (int v = 0; v < lg.size(); ++v) {
    out.self_weight[comm[v]] += lg.self_weight[v];
    for (const auto& [w, weight] : lg.adj[v]) {
      if (comm[w] == comm[v]) {
        if (v < w) out.self_weight[comm[v]] += weight;
      } else {
        acc[comm[v]][comm[w]] += weight;
      }
    }
  }
  for (int c = 0; c < num_comms; ++c) {
    out.adj[c].assign(acc[c].begin(), acc[c].end());
    std::sort(out.adj[c].begin(), out.adj[c].end());
    double s = 2.0 * out.self_weight[c];
    for (const auto& [w, weight] : out.adj[c]) s += weight;
    out.strength[c] = s;
  }
  return out;
}

}  // namespace

LouvainResult louvain_detailed(const Graph& g, std::uint64_t seed) {
  if (g.num_edges() < 1)
    throw std::invalid_argument("louvain requires at least one edge");

  Rng rng(seed);
  LevelGraph level = level_from(g);
  // node of the original graph -> community of the current level
  std::vector<int> membership(g.num_nodes);
  std::iota(membership.begin(), membership.end(), 0);

  std::vector<int> comm(level.size());
  std::iota(comm.begin(), comm.end(), 0);

  LouvainResult result;
  result.modularity_trace.push_back(
      level_modularity(level, comm, level.size()));

  while (true) {
    const bool improved = local_moves(level, comm, rng);
    if (!improved) break;

    // Compact community ids in first-appearance order.
    std::unordered_map<int, int> remap;
    for (int& c : comm) {
      auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
      c = it->second;
    }
    const int num_comms = static_cast<int>(remap.size());
    result.modularity_trace.push_back(level_modularity(level, comm, num_comms));

    for (int& m : membership) m = comm[m];
    if (num_comms == level.size()) break;  // no further aggregation possible
    level = aggregate(level, comm, num_comms);
    comm.resize(level.size());
    std::iota(comm.begin(), comm.end(), 0);
  }

  result.assignment = normalize_communities(std::move(membership));
  return result;
}

CommunityAssignment louvain(const Graph& g, std::uint64_t seed) {
  return louvain_detailed(g, seed).assignment;
}

EdgePartition edge_partition(const Graph& g, const CommunityAssignment& c) {
  if (static_cast<int>(c.node_to_community.size()) != g.num_nodes)
    throw std::invalid_argument("assignment does not cover the graph");

  EdgePartition partition;
  std::map<std::pair<int, int>, int> part_of_key;
  std::unordered_map<std::uint64_t, int> edge_to_part;
  for (const auto& e : g.edges) {
    const int cu = c.node_to_community[e.first];
    const int cv = c.node_to_community[e.second];
    const std::pair<int, int> key{std::min(cu, cv), std::max(cu, cv)};
    auto [it, inserted] =
        part_of_key.emplace(key, static_cast<int>(partition.parts.size()));
    if (inserted) {
      partition.parts.emplace_back();
      partition.part_keys.push_back(key);
    }
    partition.parts[it->second].push_back(e);
    edge_to_part.emplace(edge_key(e), it->second);
  }
  partition.edge_to_part = std::move(edge_to_part);
  return partition;
}

}  // namespace dine
