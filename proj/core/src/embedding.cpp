#include "dine/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dine/random.hpp"

namespace dine {

namespace {

// Shortest decimal that round-trips a double exactly.
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_embedding(const EmbeddingMatrix& x, const std::string& path) {
  if (!x.ids.empty() && static_cast<int>(x.ids.size()) != x.num_nodes())
    throw std::invalid_argument("id list does not match column count");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding: " + path);
  out << x.num_nodes() << ' ' << x.dim() << '\n';
  for (int v = 0; v < x.num_nodes(); ++v) {
    out << (x.ids.empty() ? std::to_string(v) : x.ids[v]);
    for (int d = 0; d < x.dim(); ++d) out << ' ' << format_double(x.values(d, v));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

EmbeddingMatrix load_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding: " + path);
  int num_nodes = 0, dim = 0;
  if (!(in >> num_nodes >> dim) || num_nodes < 1 || dim < 1)
    throw std::runtime_error(path + ": malformed header, expected 'count dim'");

  EmbeddingMatrix x;
  x.values.resize(dim, num_nodes);
  x.ids.resize(num_nodes);
  for (int v = 0; v < num_nodes; ++v) {
    if (!(in >> x.ids[v]))
      throw std::runtime_error(path + ": truncated at vector " +
                               std::to_string(v));
    for (int d = 0; d < dim; ++d) {
      if (!(in >> x.values(d, v)))
        throw std::runtime_error(path + ": truncated vector for id '" +
                                 x.ids[v] + "'");
    }
  }
  if (!x.values.allFinite())
    throw std::runtime_error(path + ": non-finite embedding entries");
  return x;
}

EmbeddingMatrix align_to_graph(const EmbeddingMatrix& x, const Graph& g) {
  if (x.ids.empty()) {
    if (x.num_nodes() != g.num_nodes)
      throw std::invalid_argument("embedding column count (" +
                                  std::to_string(x.num_nodes()) +
                                  ") does not match graph (" +
                                  std::to_string(g.num_nodes) + ")");
    return x;
  }
  std::unordered_map<std::string, int> column_of;
  column_of.reserve(x.ids.size());
  for (int v = 0; v < x.num_nodes(); ++v) column_of.emplace(x.ids[v], v);

  EmbeddingMatrix out;
  out.values.resize(x.dim(), g.num_nodes);
  out.ids.resize(g.num_nodes);
  for (int v = 0; v < g.num_nodes; ++v) {
    const std::string label = g.label_of(v);
    auto it = column_of.find(label);
    if (it == column_of.end())
      throw std::invalid_argument("no embedding vector for node '" + label +
                                  "'");
    out.values.col(v) = x.values.col(it->second);
    out.ids[v] = label;
  }
  return out;
}

EmbeddingMatrix perturb_embeddings(const EmbeddingMatrix& x, double delta,
                                   std::uint64_t seed) {
  if (delta < 0.0) throw std::invalid_argument("noise level must be >= 0");
  EmbeddingMatrix out = x;
  if (delta == 0.0) return out;
  Rng rng(seed);
  for (int v = 0; v < out.num_nodes(); ++v)
    for (int d = 0; d < out.dim(); ++d)
      out.values(d, v) = x.values(d, v) * std::exp(rng.normal(0.0, delta));
  return out;
}

}  // namespace dine
