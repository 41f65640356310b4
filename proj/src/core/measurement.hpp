#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/numerics.hpp"
#include "core/rng.hpp"

namespace censync {

/// Binary node labels. Two assignments describe the same labeling when they
/// differ by a global flip; canonical() picks the representative with bit 0
/// equal to 0.
class Assignment {
public:
  explicit Assignment(std::vector<uint8_t> bits);
  static Assignment zeros(int32_t n);
  static Assignment random(int32_t n, RandomStream& rng);
  static Assignment from_string(const std::string& bits);

  int32_t size() const { return static_cast<int32_t>(bits_.size()); }
  uint8_t bit(int32_t i) const { return bits_[i]; }
  void set_bit(int32_t i, uint8_t b) { bits_[i] = b & 1; }

  Assignment flipped() const;
  Assignment xored(const Assignment& other) const;
  Assignment canonical() const;
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

private:
  std::vector<uint8_t> bits_;
};

/// Distance between labelings up to global flip; zero means exact recovery.
int32_t agreement_error(const Assignment& a, const Assignment& b);

/// Per-edge observed bits aligned to a graph's canonical edge order.
class CensoredMeasurements {
public:
  CensoredMeasurements(std::shared_ptr<const Graph> g, std::vector<uint8_t> y);

  const Graph& graph() const { return *g_; }
  std::shared_ptr<const Graph> graph_ptr() const { return g_; }
  int64_t m() const { return static_cast<int64_t>(y_.size()); }
  uint8_t bit(int64_t e) const { return y_[e]; }
  /// Sign rho_e = (-1)^{y_e}.
  int32_t sign(int64_t e) const { return y_[e] ? -1 : +1; }
  const std::vector<uint8_t>& bits() const { return y_; }

private:
  std::shared_ptr<const Graph> g_;
  std::vector<uint8_t> y_;
};

struct NoisePattern {
  std::vector<uint8_t> z;  // per-edge bits, canonical edge order
};

struct SynthesizedMeasurements {
  CensoredMeasurements meas;
  NoisePattern noise;
};

/// y_e = x_u xor x_v xor z_e with z_e ~ Bernoulli(eps) i.i.d.
SynthesizedMeasurements synthesize(std::shared_ptr<const Graph> g, const Assignment& x,
                                   double eps, RandomStream& rng);

/// One uniform draw per edge; thresholding the same draws at different eps
/// couples noise patterns monotonically across noise levels.
std::vector<double> draw_edge_uniforms(const Graph& g, RandomStream& rng);
SynthesizedMeasurements synthesize_from_uniforms(std::shared_ptr<const Graph> g,
                                                 const Assignment& x, double eps,
                                                 const std::vector<double>& uniforms);

enum class TernaryLabel : uint8_t { Zero = 0, One = 1, Star = 2 };

/// Pair labels restricted to the base-graph support; off-support pairs are
/// Star by construction and only on-support labels are stored.
class TernaryLabels {
public:
  TernaryLabels(std::shared_ptr<const Graph> g, std::vector<uint8_t> on_edge_labels);
  const Graph& graph() const { return *g_; }
  std::shared_ptr<const Graph> graph_ptr() const { return g_; }
  TernaryLabel label(int32_t u, int32_t v) const;
  uint8_t edge_label(int64_t e) const { return labels_[e]; }

private:
  std::shared_ptr<const Graph> g_;
  std::vector<uint8_t> labels_;  // {0,1} per edge
};

/// Block sampling: on-support pairs get label 1 with probability q1 when the
/// endpoints agree and q2 when they differ.
TernaryLabels censored_block_sample(std::shared_ptr<const Graph> g, const Assignment& x,
                                    double q1, double q2, RandomStream& rng);

/// Reinterpret on-edge labels as measurement bits. Matches the linear model
/// exactly in the symmetric case q1 = eps, q2 = 1 - eps.
CensoredMeasurements labels_to_measurements(const TernaryLabels& labels);

/// W(i,j) = rho_ij on edges, 0 elsewhere; zero diagonal.
SparseSymmetric signed_weight_matrix(const CensoredMeasurements& meas);

struct EdgeSubset {
  std::vector<uint8_t> mask;  // per-edge membership, canonical order
  int64_t count = 0;
};

/// Edges whose measurement disagrees with the candidate's parity.
EdgeSubset error_subgraph(const CensoredMeasurements& meas, const Assignment& candidate);

/// L_G - 2 L_H for H = error_subgraph(meas, candidate). Rows sum to zero.
SparseSymmetric certificate_matrix(const CensoredMeasurements& meas,
                                   const Assignment& candidate);

/// y'_e = y_e xor s_u xor s_v.
CensoredMeasurements gauge_transform(const CensoredMeasurements& meas, const Assignment& s);

CensoredMeasurements load_measurements(std::shared_ptr<const Graph> g,
                                       const std::string& path);
void save_measurements(const CensoredMeasurements& meas, const std::string& path);

}  // namespace censync
