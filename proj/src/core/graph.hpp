#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/numerics.hpp"
#include "core/rng.hpp"

namespace censync {

struct Edge {
  int32_t u;
  int32_t v;  // always u < v
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph. Edges are kept sorted
/// lexicographically; the position of an edge in that order is the canonical
/// edge index used by every per-edge vector in the system.
class Graph {
public:
  Graph(int32_t n, std::vector<Edge> edges);

  int32_t n() const { return n_; }
  int64_t m() const { return static_cast<int64_t>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int32_t>& neighbors(int32_t v) const { return adj_[v]; }
  int32_t degree(int32_t v) const { return static_cast<int32_t>(adj_[v].size()); }

  /// Canonical index of edge {u, v}, or -1 if absent.
  int64_t edge_index(int32_t u, int32_t v) const;

  int32_t min_degree() const;
  double avg_degree() const;
  /// Degree if every vertex has the same one, else -1.
  int32_t regular_degree() const;

private:
  int32_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int32_t>> adj_;
};

Graph gen_erdos_renyi(int32_t n, double p, RandomStream& rng);

/// Pairing (configuration) model with whole-graph rejection of loops and
/// multi-edges; requires n*d even, retries capped at 10*n*d restarts.
Graph gen_random_regular(int32_t n, int32_t d, RandomStream& rng);

bool is_connected(const Graph& g);

/// Vertex subset as a bitmask over [n].
class VertexSubset {
public:
  explicit VertexSubset(int32_t n);
  void set(int32_t v, bool in);
  bool test(int32_t v) const;
  int32_t count() const { return count_; }
  int32_t universe() const { return n_; }

private:
  int32_t n_;
  int32_t count_ = 0;
  std::vector<uint64_t> words_;
};

struct CutVol {
  int64_t cut;
  int64_t vol_s;
  int64_t vol_sc;
};

CutVol cut_and_vol(const Graph& g, const VertexSubset& s);

/// Exact Cheeger constant by enumeration of all subsets containing vertex 0.
double cheeger_constant(const Graph& g, int32_t brute_force_cap = 22);

struct SpectralLambdas {
  double lambda2;   // second largest eigenvalue of (1/d) A
  double lambda_n;  // smallest eigenvalue of (1/d) A
};

/// Defined for d-regular graphs with d >= 1 only; other inputs are rejected.
SpectralLambdas spectral_lambdas(const Graph& g, int dense_cap = 2000);

Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

/// Dense (1/scale) * adjacency matrix.
DenseSymmetric dense_adjacency(const Graph& g, double scale = 1.0);

}  // namespace censync
