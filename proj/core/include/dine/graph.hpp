#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dine {

// Canonical undirected edge, first < second.
using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int v) {
  return u < v ? Edge{u, v} : Edge{v, u};
}

// Packs a canonical edge into a single hashable key.
inline std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

inline std::uint64_t edge_key(const Edge& e) { return edge_key(e.first, e.second); }

// Simple undirected graph with contiguous node indices. Immutable after
// construction; adjacency lists are sorted and symmetric, edges are stored
// once in canonical (min,max) order.
struct Graph {
  int num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adjacency;
  // Original identifiers, one per node; empty when nodes never had external
  // ids (e.g. generated graphs).
  std::vector<std::string> node_labels;

  int num_edges() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
  bool has_edge(int u, int v) const;
  // Label of node v: the stored identifier, or its decimal index.
  std::string label_of(int v) const;
};

struct GraphBuildStats {
  int self_loops_dropped = 0;
  int duplicates_merged = 0;
};

// Canonicalizes, deduplicates, drops self-loops and builds adjacency.
// Throws std::invalid_argument on out-of-range node indices.
Graph make_graph(int num_nodes, const std::vector<Edge>& edges,
                 std::vector<std::string> node_labels = {},
                 GraphBuildStats* stats = nullptr);

// Reads a whitespace-separated edge list ("u v" per line, '#' comments,
// arbitrary string ids mapped to dense indices in first-appearance order).
// Throws std::runtime_error with the line number on malformed lines and on
// an empty graph.
Graph load_edge_list(const std::string& path, GraphBuildStats* stats = nullptr);

void save_edge_list(const Graph& g, const std::string& path);

// Induced subgraph on the largest connected component, node indices
// recompacted. Ties between equal-size components go to the component
// containing the smallest original node index.
Graph largest_connected_component(const Graph& g);

struct CommunityAssignment {
  std::vector<int> node_to_community;
  int num_communities = 0;

  int community_of(int v) const { return node_to_community[v]; }
};

// Reindexes community ids to be contiguous in [0, num_communities) in
// first-appearance order.
CommunityAssignment normalize_communities(std::vector<int> node_to_community);

// One "node<TAB>community_id" line per node.
void save_communities(const Graph& g, const CommunityAssignment& c,
                      const std::string& path);
CommunityAssignment load_communities(const Graph& g, const std::string& path);

struct SbmConfig {
  int num_blocks = 8;
  int block_size = 10;
  double intra_prob = 1.0;
  double inter_prob = 0.0;
  std::uint64_t seed = 0;
};

// Stochastic block model draw; block membership doubles as the ground-truth
// community assignment.
std::pair<Graph, CommunityAssignment> generate_sbm(const SbmConfig& cfg);

// Newman modularity Q of an assignment covering all nodes.
double modularity(const Graph& g, const CommunityAssignment& c);

struct LouvainResult {
  CommunityAssignment assignment;
  // Q before any move, then after each level's local-move phase.
  std::vector<double> modularity_trace;
};

// Greedy modularity optimization: seeded-shuffle visit order, first
// positive-gain move accepted, graph aggregation between levels, repeated
// until no gain. Deterministic per seed.
LouvainResult louvain_detailed(const Graph& g, std::uint64_t seed);
CommunityAssignment louvain(const Graph& g, std::uint64_t seed);

// Partition of the edge set keyed by the unordered pair of endpoint
// communities {c(u), c(v)}.
struct EdgePartition {
  std::vector<std::vector<Edge>> parts;
  std::vector<std::pair<int, int>> part_keys;  // (min,max) community pair
  std::unordered_map<std::uint64_t, int> edge_to_part;

  int num_parts() const { return static_cast<int>(parts.size()); }
  int part_of(const Edge& e) const { return edge_to_part.at(edge_key(e)); }
};

EdgePartition edge_partition(const Graph& g, const CommunityAssignment& c);

}  // namespace dine
