#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/measurement.hpp"

namespace censync {

struct DecodeResult {
  std::string algorithm;
  Assignment estimate;  // canonical representative, bit 0 = 0
  double objective;     // ML: violated-edge count; others: Tr[W g g^T]
  bool tie = false;
  std::optional<int64_t> num_optimal_classes;
  std::optional<std::vector<int32_t>> undecided;
  std::optional<bool> certified;
  std::optional<double> lambda2;
  std::optional<bool> converged;
  std::optional<bool> rank_one;

  DecodeResult(std::string alg, Assignment est, double obj)
      : algorithm(std::move(alg)), estimate(std::move(est)), objective(obj) {}
};

/// Number of edges whose measurement disagrees with the candidate's parity.
int64_t ml_cost(const CensoredMeasurements& meas, const Assignment& x);

/// Tr[W g g^T] = 2 * sum_e rho_e g_u g_v for g_i = (-1)^{x_i}.
double quadratic_objective(const CensoredMeasurements& meas, const Assignment& x);

/// Exact maximum-likelihood decoding by enumeration of all 2^(n-1) label
/// classes (bit 0 fixed at 0). Returns the minimum cost, the number of
/// minimizing classes and the lexicographically smallest minimizer.
DecodeResult ml_bruteforce(const CensoredMeasurements& meas, int32_t cap = 24);

struct SdpConfig {
  int32_t rank = 0;             // 0 -> min(ceil(sqrt(2n)) + 1, n)
  int64_t max_iterations = 20000;
  double grad_tol = 1e-9;       // on the Riemannian gradient, relative to scale
  double initial_step = 0.0;    // 0 -> 1/scale; later steps are Barzilai-Borwein
  uint64_t seed = 0;            // stream for the random start
  uint64_t stream = 0;
};

/// Low-rank factorized SDP: gradient ascent of Tr[W V V^T] over matrices V
/// with unit-norm rows, rounded through the top singular direction of V.
DecodeResult sdp_decode(const CensoredMeasurements& meas, const SdpConfig& cfg = {});

struct CertificateVerdict {
  double lambda2;
  bool certified;
};

/// Builds L_G - 2 L_H for the candidate and tests it on the complement of the
/// all-ones direction. A strict certificate makes the candidate's class the
/// unique optimum of the relaxation.
CertificateVerdict certificate_check(const CensoredMeasurements& meas,
                                     const Assignment& candidate);

/// Signs of the top eigenvector of W.
DecodeResult spectral_decode(const CensoredMeasurements& meas);

/// Majority vote over 2-paths to a center vertex (default: maximum degree,
/// ties to the smallest index). Vertices with a zero vote margin are reported
/// undecided and default to the center's side. The direct edge to the center
/// does not vote.
DecodeResult two_path_vote(const CensoredMeasurements& meas, int32_t center = -1);

struct WitnessSets {
  std::vector<int32_t> strict;  // more than half of incident edges noisy
  std::vector<int32_t> tie;     // exactly half
};

/// Vertices at which the noise locally overwhelms the truth; a strict witness
/// implies the truth's class is not the unique ML minimizer.
WitnessSets local_failure_witnesses(const Graph& g, const NoisePattern& z);

std::string decode_result_to_json(const DecodeResult& r);

}  // namespace censync
