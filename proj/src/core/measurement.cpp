#include "core/measurement.hpp"

#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace censync {

Assignment::Assignment(std::vector<uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) fail_invalid("Assignment: empty bit vector");
  for (auto& b : bits_)
    if (b > 1) fail_invalid("Assignment: bits must be 0 or 1");
}

Assignment Assignment::zeros(int32_t n) {
  if (n < 1) fail_invalid("Assignment: size must be positive");
  return Assignment(std::vector<uint8_t>(n, 0));
}

Assignment Assignment::random(int32_t n, RandomStream& rng) {
  if (n < 1) fail_invalid("Assignment: size must be positive");
  std::vector<uint8_t> bits(n);
  for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
  return Assignment(std::move(bits));
}

Assignment Assignment::from_string(const std::string& s) {
  std::vector<uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') fail_invalid("Assignment: string must be over {0,1}");
    bits.push_back(c == '1');
  }
  return Assignment(std::move(bits));
}

Assignment Assignment::flipped() const {
  std::vector<uint8_t> bits(bits_);
  for (auto& b : bits) b ^= 1;
  return Assignment(std::move(bits));
}

Assignment Assignment::xored(const Assignment& other) const {
  if (other.size() != size()) fail_invalid("Assignment: length mismatch");
  std::vector<uint8_t> bits(bits_);
  for (size_t i = 0; i < bits.size(); ++i) bits[i] ^= other.bits_[i];
  return Assignment(std::move(bits));
}

Assignment Assignment::canonical() const { return bits_[0] ? flipped() : *this; }

std::string Assignment::to_string() const {
  std::string s(bits_.size(), '0');
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s[i] = '1';
  return s;
}

int32_t agreement_error(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) fail_invalid("agreement_error: length mismatch");
  int32_t d = 0;
  for (int32_t i = 0; i < a.size(); ++i) d += a.bit(i) != b.bit(i);
  return std::min(d, a.size() - d);
}

CensoredMeasurements::CensoredMeasurements(std::shared_ptr<const Graph> g,
                                           std::vector<uint8_t> y)
    : g_(std::move(g)), y_(std::move(y)) {
  if (!g_) fail_invalid("CensoredMeasurements: null graph");
  if (static_cast<int64_t>(y_.size()) != g_->m())
    fail_invalid("CensoredMeasurements: bit count does not match edge count");
  for (auto b : y_)
    if (b > 1) fail_invalid("CensoredMeasurements: bits must be 0 or 1");
}

std::vector<double> draw_edge_uniforms(const Graph& g, RandomStream& rng) {
  std::vector<double> u(g.m());
  for (auto& x : u) x = rng.next_double();
  return u;
}

SynthesizedMeasurements synthesize_from_uniforms(std::shared_ptr<const Graph> g,
                                                 const Assignment& x, double eps,
                                                 const std::vector<double>& uniforms) {
  if (!g) fail_invalid("synthesize: null graph");
  if (!(eps >= 0.0) || !(eps <= 0.5)) fail_invalid("synthesize: eps outside [0, 1/2]");
  if (x.size() != g->n()) fail_invalid("synthesize: assignment length mismatch");
  if (static_cast<int64_t>(uniforms.size()) != g->m())
    fail_invalid("synthesize: uniform draw count mismatch");
  std::vector<uint8_t> y(g->m()), z(g->m());
  const auto& edges = g->edges();
  for (int64_t e = 0; e < g->m(); ++e) {
    z[e] = uniforms[e] < eps ? 1 : 0;
    y[e] = x.bit(edges[e].u) ^ x.bit(edges[e].v) ^ z[e];
  }
  return SynthesizedMeasurements{CensoredMeasurements(std::move(g), std::move(y)),
                                 NoisePattern{std::move(z)}};
}

SynthesizedMeasurements synthesize(std::shared_ptr<const Graph> g, const Assignment& x,
                                   double eps, RandomStream& rng) {
  if (!g) fail_invalid("synthesize: null graph");
  auto uniforms = draw_edge_uniforms(*g, rng);
  return synthesize_from_uniforms(std::move(g), x, eps, uniforms);
}

TernaryLabels::TernaryLabels(std::shared_ptr<const Graph> g,
                             std::vector<uint8_t> on_edge_labels)
    : g_(std::move(g)), labels_(std::move(on_edge_labels)) {
  if (!g_) fail_invalid("TernaryLabels: null graph");
  if (static_cast<int64_t>(labels_.size()) != g_->m())
    fail_invalid("TernaryLabels: label count does not match edge count");
}

TernaryLabel TernaryLabels::label(int32_t u, int32_t v) const {
  int64_t e = g_->edge_index(u, v);
  if (e < 0) return TernaryLabel::Star;
  return labels_[e] ? TernaryLabel::One : TernaryLabel::Zero;
}

TernaryLabels censored_block_sample(std::shared_ptr<const Graph> g, const Assignment& x,
                                    double q1, double q2, RandomStream& rng) {
  if (!g) fail_invalid("censored_block_sample: null graph");
  if (!(q1 >= 0.0) || !(q1 <= 1.0) || !(q2 >= 0.0) || !(q2 <= 1.0))
    fail_invalid("censored_block_sample: q1, q2 must be in [0,1]");
  if (x.size() != g->n()) fail_invalid("censored_block_sample: assignment length mismatch");
  std::vector<uint8_t> labels(g->m());
  const auto& edges = g->edges();
  for (int64_t e = 0; e < g->m(); ++e) {
    bool same = x.bit(edges[e].u) == x.bit(edges[e].v);
    labels[e] = rng.bernoulli(same ? q1 : q2) ? 1 : 0;
  }
  return TernaryLabels(std::move(g), std::move(labels));
}

CensoredMeasurements labels_to_measurements(const TernaryLabels& labels) {
  const Graph& g = labels.graph();
  std::vector<uint8_t> y(g.m());
  for (int64_t e = 0; e < g.m(); ++e) y[e] = labels.edge_label(e);
  return CensoredMeasurements(labels.graph_ptr(), std::move(y));
}

SparseSymmetric signed_weight_matrix(const CensoredMeasurements& meas) {
  const Graph& g = meas.graph();
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(g.m());
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e)
    trip.emplace_back(edges[e].u, edges[e].v, double(meas.sign(e)));
  return SparseSymmetric(g.n(), trip);
}

EdgeSubset error_subgraph(const CensoredMeasurements& meas, const Assignment& candidate) {
  const Graph& g = meas.graph();
  if (candidate.size() != g.n()) fail_invalid("error_subgraph: assignment length mismatch");
  EdgeSubset h;
  h.mask.assign(g.m(), 0);
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e) {
    uint8_t parity = candidate.bit(edges[e].u) ^ candidate.bit(edges[e].v);
    if (parity != meas.bit(e)) {
      h.mask[e] = 1;
      ++h.count;
    }
  }
  return h;
}

SparseSymmetric certificate_matrix(const CensoredMeasurements& meas,
                                   const Assignment& candidate) {
  const Graph& g = meas.graph();
  EdgeSubset h = error_subgraph(meas, candidate);
  std::vector<double> diag(g.n(), 0.0);
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(g.m() + g.n());
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e) {
    double alpha = h.mask[e] ? -1.0 : 1.0;  // +Lambda_e for correct, -Lambda_e for noisy
    trip.emplace_back(edges[e].u, edges[e].v, -alpha);
    diag[edges[e].u] += alpha;
    diag[edges[e].v] += alpha;
  }
  for (int32_t i = 0; i < g.n(); ++i)
    if (diag[i] != 0.0) trip.emplace_back(i, i, diag[i]);
  return SparseSymmetric(g.n(), trip);
}

CensoredMeasurements gauge_transform(const CensoredMeasurements& meas, const Assignment& s) {
  const Graph& g = meas.graph();
  if (s.size() != g.n()) fail_invalid("gauge_transform: assignment length mismatch");
  std::vector<uint8_t> y(meas.bits());
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e)
    y[e] ^= s.bit(edges[e].u) ^ s.bit(edges[e].v);
  return CensoredMeasurements(meas.graph_ptr(), std::move(y));
}

CensoredMeasurements load_measurements(std::shared_ptr<const Graph> g,
                                       const std::string& path) {
  if (!g) fail_invalid("load_measurements: null graph");
  std::ifstream in(path);
  if (!in) fail_io("load_measurements: cannot open " + path);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  int64_t expected_m = -1;
  std::vector<uint8_t> y;
  int64_t next_edge = 0;
  const auto& edges = g->edges();
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    if (!header_seen) {
      std::string tn, tm;
      long long n, m;
      if (!(ls >> tn >> n >> tm >> m) || tn != "n" || tm != "m")
        fail_io("load_measurements: expected header 'n <N> m <M>' at line " +
                std::to_string(lineno));
      if (n != g->n()) fail_io("load_measurements: vertex count does not match graph");
      if (m != g->m()) fail_io("load_measurements: edge count does not match graph");
      expected_m = m;
      header_seen = true;
      continue;
    }
    long long u, v;
    int yb;
    if (!(ls >> u >> v >> yb) || (yb != 0 && yb != 1))
      fail_io("load_measurements: malformed line " + std::to_string(lineno));
    if (u > v) std::swap(u, v);
    if (next_edge >= expected_m)
      fail_io("load_measurements: more measurement lines than edges");
    if (edges[next_edge].u != u || edges[next_edge].v != v)
      fail_io("load_measurements: edge order mismatch at line " + std::to_string(lineno));
    y.push_back(static_cast<uint8_t>(yb));
    ++next_edge;
  }
  if (!header_seen) fail_io("load_measurements: missing header in " + path);
  if (next_edge != expected_m) fail_io("load_measurements: measurement count mismatch");
  return CensoredMeasurements(std::move(g), std::move(y));
}

void save_measurements(const CensoredMeasurements& meas, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail_io("save_measurements: cannot open " + path);
  const Graph& g = meas.graph();
  out << "n " << g.n() << " m " << g.m() << "\n";
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e)
    out << edges[e].u << " " << edges[e].v << " " << int(meas.bit(e)) << "\n";
  if (!out) fail_io("save_measurements: write failed for " + path);
}

}  // namespace censync
