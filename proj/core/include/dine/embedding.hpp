#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dine/graph.hpp"

namespace dine {

// Dense node embedding, one column per node (D x |V|).
struct EmbeddingMatrix {
  Eigen::MatrixXd values;
  // Node identifiers, parallel to columns; empty means columns are indexed
  // positionally.
  std::vector<std::string> ids;

  int dim() const { return static_cast<int>(values.rows()); }
  int num_nodes() const { return static_cast<int>(values.cols()); }
};

// word2vec text format: header "num_nodes D", then "id v_1 ... v_D" per
// line, full float precision.
void save_embedding(const EmbeddingMatrix& x, const std::string& path);
EmbeddingMatrix load_embedding(const std::string& path);

// Reorders columns so column v holds the vector of graph node v, matching
// ids against node labels. Throws when a node has no vector.
EmbeddingMatrix align_to_graph(const EmbeddingMatrix& x, const Graph& g);

// Multiplies every entry by exp(eps), eps ~ Normal(0, delta) i.i.d. The
// delta knob is the standard deviation handed to the sampler.
EmbeddingMatrix perturb_embeddings(const EmbeddingMatrix& x, double delta,
                                   std::uint64_t seed);

}  // namespace dine
