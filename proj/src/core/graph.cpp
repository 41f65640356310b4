#include "core/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace censync {

Graph::Graph(int32_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) fail_invalid("Graph: vertex count must be positive");
  for (auto& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) fail_invalid("Graph: self-loop rejected");
    if (e.u < 0 || e.v >= n) fail_invalid("Graph: endpoint out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  for (size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i] == edges_[i - 1]) fail_invalid("Graph: duplicate edge rejected");
  adj_.assign(n_, {});
  for (const auto& e : edges_) {
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

int64_t Graph::edge_index(int32_t u, int32_t v) const {
  if (u > v) std::swap(u, v);
  Edge key{u, v};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || !(*it == key)) return -1;
  return it - edges_.begin();
}

int32_t Graph::min_degree() const {
  int32_t best = std::numeric_limits<int32_t>::max();
  for (int32_t v = 0; v < n_; ++v) best = std::min(best, degree(v));
  return best;
}

double Graph::avg_degree() const { return n_ == 0 ? 0.0 : 2.0 * double(m()) / double(n_); }

int32_t Graph::regular_degree() const {
  int32_t d = degree(0);
  for (int32_t v = 1; v < n_; ++v)
    if (degree(v) != d) return -1;
  return d;
}

Graph gen_erdos_renyi(int32_t n, double p, RandomStream& rng) {
  if (n < 1) fail_invalid("gen_erdos_renyi: n must be positive");
  if (!(p >= 0.0) || !(p <= 1.0)) fail_invalid("gen_erdos_renyi: p outside [0,1]");
  std::vector<Edge> edges;
  for (int32_t u = 0; u < n; ++u)
    for (int32_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph gen_random_regular(int32_t n, int32_t d, RandomStream& rng) {
  if (n < 1 || d < 0 || d >= n) fail_invalid("gen_random_regular: need 0 <= d < n");
  if ((static_cast<int64_t>(n) * d) % 2 != 0)
    fail_invalid("gen_random_regular: n*d must be even");
  if (d == 0) return Graph(n, {});

  int64_t stubs_count = static_cast<int64_t>(n) * d;
  int64_t max_restarts = 10 * stubs_count;
  std::vector<int32_t> stubs(stubs_count);
  for (int64_t i = 0; i < stubs_count; ++i) stubs[i] = static_cast<int32_t>(i / d);

  for (int64_t attempt = 0; attempt < max_restarts; ++attempt) {
    for (int64_t i = stubs_count - 1; i > 0; --i) {
      int64_t j = static_cast<int64_t>(rng.uniform_below(static_cast<uint64_t>(i + 1)));
      std::swap(stubs[i], stubs[j]);
    }
    std::vector<Edge> edges;
    edges.reserve(stubs_count / 2);
    bool ok = true;
    for (int64_t i = 0; i < stubs_count; i += 2) {
      int32_t u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      edges.push_back({u, v});
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    for (size_t i = 1; ok && i < edges.size(); ++i)
      if (edges[i] == edges[i - 1]) ok = false;
    if (!ok) continue;
    return Graph(n, std::move(edges));
  }
  fail_compute("gen_random_regular: pairing model did not produce a simple graph");
}

bool is_connected(const Graph& g) {
  int32_t n = g.n();
  std::vector<uint8_t> seen(n, 0);
  std::vector<int32_t> queue{0};
  seen[0] = 1;
  int32_t reached = 1;
  while (!queue.empty()) {
    int32_t v = queue.back();
    queue.pop_back();
    for (int32_t w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
  }
  return reached == n;
}

VertexSubset::VertexSubset(int32_t n) : n_(n), words_((n + 63) / 64, 0) {
  if (n < 1) fail_invalid("VertexSubset: empty universe");
}

void VertexSubset::set(int32_t v, bool in) {
  uint64_t bit = 1ULL << (v & 63);
  uint64_t& word = words_[v >> 6];
  bool cur = word & bit;
  if (cur != in) {
    word ^= bit;
    count_ += in ? 1 : -1;
  }
}

bool VertexSubset::test(int32_t v) const { return words_[v >> 6] & (1ULL << (v & 63)); }

CutVol cut_and_vol(const Graph& g, const VertexSubset& s) {
  if (s.universe() != g.n()) fail_invalid("cut_and_vol: subset universe mismatch");
  if (s.count() == 0 || s.count() == g.n())
    fail_invalid("cut_and_vol: subset must be nonempty and proper");
  CutVol out{0, 0, 0};
  for (const auto& e : g.edges()) {
    bool a = s.test(e.u), b = s.test(e.v);
    if (a != b) ++out.cut;
  }
  for (int32_t v = 0; v < g.n(); ++v) {
    if (s.test(v))
      out.vol_s += g.degree(v);
    else
      out.vol_sc += g.degree(v);
  }
  return out;
}

double cheeger_constant(const Graph& g, int32_t brute_force_cap) {
  int32_t n = g.n();
  if (g.m() == 0) fail_invalid("cheeger_constant: graph has no edges");
  if (n > brute_force_cap) fail_compute("cheeger_constant: n exceeds brute-force cap");

  int64_t vol_total = 2 * g.m();
  // Gray-code walk over subsets of {1..n-1}; vertex 0 always in S, so each
  // complementary pair is visited once.
  std::vector<uint8_t> in_s(n, 0);
  in_s[0] = 1;
  int64_t cut = g.degree(0), vol_s = g.degree(0);
  double best = std::numeric_limits<double>::infinity();

  auto consider = [&]() {
    int64_t vol_min = std::min(vol_s, vol_total - vol_s);
    if (vol_min <= 0) return;  // ratio treated as +infinity
    best = std::min(best, double(cut) / double(vol_min));
  };
  consider();

  uint64_t total = (n >= 2) ? (1ULL << (n - 1)) : 1;
  for (uint64_t t = 1; t < total; ++t) {
    int32_t v = 1 + static_cast<int32_t>(std::countr_zero(t));
    bool entering = !in_s[v];
    in_s[v] = entering;
    int64_t delta_cut = 0;
    for (int32_t w : g.neighbors(v)) {
      bool w_in = in_s[w];
      if (entering)
        delta_cut += w_in ? -1 : +1;
      else
        delta_cut += w_in ? +1 : -1;
    }
    cut += delta_cut;
    vol_s += entering ? g.degree(v) : -g.degree(v);
    if (vol_s < vol_total)  // proper subset guaranteed: vertex 0 in S, and
      consider();           // S = V only when all vertices joined
  }
  return best;
}

SpectralLambdas spectral_lambdas(const Graph& g, int dense_cap) {
  int32_t d = g.regular_degree();
  if (d < 0) fail_invalid("spectral_lambdas: graph is not regular");
  if (d == 0) fail_invalid("spectral_lambdas: degree must be at least 1");
  DenseSymmetric a = dense_adjacency(g, double(d));
  auto eig = eig_dense(a, false, dense_cap);
  int n = g.n();
  return SpectralLambdas{eig.values[n - 2], eig.values[0]};
}

DenseSymmetric dense_adjacency(const Graph& g, double scale) {
  DenseSymmetric a(g.n());
  for (const auto& e : g.edges()) a.set(e.u, e.v, 1.0 / scale);
  return a;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("load_graph: cannot open " + path);
  std::string line;
  int32_t n = -1;
  std::vector<Edge> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      std::string tag;
      if (!(ls >> tag >> n) || tag != "n" || n < 1)
        fail_io("load_graph: expected header 'n <N>' at line " + std::to_string(lineno));
      continue;
    }
    long long u, v;
    if (!(ls >> u >> v))
      fail_io("load_graph: malformed edge line " + std::to_string(lineno));
    if (u > v) std::swap(u, v);
    if (u == v) fail_io("load_graph: self-loop at line " + std::to_string(lineno));
    if (u < 0 || v >= n) fail_io("load_graph: vertex out of range at line " + std::to_string(lineno));
    edges.push_back({static_cast<int32_t>(u), static_cast<int32_t>(v)});
  }
  if (n < 0) fail_io("load_graph: missing 'n <N>' header in " + path);
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) fail_io("load_graph: duplicate edge in " + path);
  return Graph(n, std::move(edges));
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("save_graph: cannot open " + path);
  out << "n " << g.n() << "\n";
  for (const auto& e : g.edges()) out << e.u << " " << e.v << "\n";
  if (!out) fail_io("save_graph: write failed for " + path);
}

}  // namespace censync
