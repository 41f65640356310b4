#include "core/decoders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/numerics.hpp"

namespace censync {

int64_t ml_cost(const CensoredMeasurements& meas, const Assignment& x) {
  const Graph& g = meas.graph();
  if (x.size() != g.n()) fail_invalid("ml_cost: assignment length mismatch");
  int64_t cost = 0;
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e)
    cost += (x.bit(edges[e].u) ^ x.bit(edges[e].v)) != meas.bit(e);
  return cost;
}

double quadratic_objective(const CensoredMeasurements& meas, const Assignment& x) {
  // Tr[W g g^T] = 2 (m - 2 * violated)
  return 2.0 * double(meas.m() - 2 * ml_cost(meas, x));
}

namespace {

// Lexicographic order on label vectors (x_1, ..., x_{n-1}); vertex v maps to
// mask bit v-1, so the lowest differing bit decides.
bool lex_less(uint64_t a, uint64_t b) {
  uint64_t diff = a ^ b;
  if (diff == 0) return false;
  uint64_t low = diff & (~diff + 1);
  return (a & low) == 0;
}

Assignment mask_to_assignment(uint64_t mask, int32_t n) {
  std::vector<uint8_t> bits(n, 0);
  for (int32_t v = 1; v < n; ++v) bits[v] = (mask >> (v - 1)) & 1;
  return Assignment(std::move(bits));
}

}  // namespace

DecodeResult ml_bruteforce(const CensoredMeasurements& meas, int32_t cap) {
  const Graph& g = meas.graph();
  int32_t n = g.n();
  if (n > cap) fail_compute("ml_bruteforce: n exceeds enumeration cap");

  // incident canonical edge indices per vertex
  std::vector<std::vector<int64_t>> incident(n);
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e) {
    incident[edges[e].u].push_back(e);
    incident[edges[e].v].push_back(e);
  }

  std::vector<uint8_t> viol(g.m());
  int64_t cost = 0;
  for (int64_t e = 0; e < g.m(); ++e) {
    viol[e] = meas.bit(e);
    cost += viol[e];
  }

  int64_t best_cost = cost;
  uint64_t best_mask = 0;
  int64_t best_count = 1;

  uint64_t total = (n >= 2) ? (1ULL << (n - 1)) : 1;
  for (uint64_t t = 1; t < total; ++t) {
    int32_t v = 1 + std::countr_zero(t);
    for (int64_t e : incident[v]) {
      viol[e] ^= 1;
      cost += viol[e] ? +1 : -1;
    }
    uint64_t gray = t ^ (t >> 1);
    if (cost < best_cost) {
      best_cost = cost;
      best_mask = gray;
      best_count = 1;
    } else if (cost == best_cost) {
      ++best_count;
      if (lex_less(gray, best_mask)) best_mask = gray;
    }
  }

  DecodeResult r("ml", mask_to_assignment(best_mask, n), double(best_cost));
  r.num_optimal_classes = best_count;
  r.tie = best_count > 1;
  return r;
}

CertificateVerdict certificate_check(const CensoredMeasurements& meas,
                                     const Assignment& candidate) {
  SparseSymmetric m = certificate_matrix(meas, candidate);
  PsdVerdict v = psd_with_known_null(m);
  return CertificateVerdict{v.lambda2, v.strictly_certified};
}

namespace {

struct SdpWork {
  int32_t n;
  int32_t k;
  const Graph* g;
  const CensoredMeasurements* meas;

  // y = 2 W V (row-major n x k)
  void gradient_full(const std::vector<double>& V, std::vector<double>& G) const {
    std::fill(G.begin(), G.end(), 0.0);
    const auto& edges = g->edges();
    for (int64_t e = 0; e < g->m(); ++e) {
      double rho = meas->sign(e);
      const double* vu = &V[size_t(edges[e].u) * k];
      const double* vv = &V[size_t(edges[e].v) * k];
      double* gu = &G[size_t(edges[e].u) * k];
      double* gv = &G[size_t(edges[e].v) * k];
      for (int32_t c = 0; c < k; ++c) {
        gu[c] += 2.0 * rho * vv[c];
        gv[c] += 2.0 * rho * vu[c];
      }
    }
  }

  double objective(const std::vector<double>& V) const {
    const auto& edges = g->edges();
    double obj = 0.0;
    for (int64_t e = 0; e < g->m(); ++e) {
      double rho = meas->sign(e);
      const double* vu = &V[size_t(edges[e].u) * k];
      const double* vv = &V[size_t(edges[e].v) * k];
      double dotp = 0.0;
      for (int32_t c = 0; c < k; ++c) dotp += vu[c] * vv[c];
      obj += 2.0 * rho * dotp;
    }
    return obj;
  }

  void project_tangent(const std::vector<double>& V, std::vector<double>& G) const {
    for (int32_t i = 0; i < n; ++i) {
      const double* vi = &V[size_t(i) * k];
      double* gi = &G[size_t(i) * k];
      double d = 0.0;
      for (int32_t c = 0; c < k; ++c) d += gi[c] * vi[c];
      for (int32_t c = 0; c < k; ++c) gi[c] -= d * vi[c];
    }
  }

  void retract(std::vector<double>& V) const {
    for (int32_t i = 0; i < n; ++i) {
      double* vi = &V[size_t(i) * k];
      double nn = 0.0;
      for (int32_t c = 0; c < k; ++c) nn += vi[c] * vi[c];
      nn = std::sqrt(nn);
      if (nn > 0) {
        for (int32_t c = 0; c < k; ++c) vi[c] /= nn;
      } else {
        vi[0] = 1.0;
        for (int32_t c = 1; c < k; ++c) vi[c] = 0.0;
      }
    }
  }
};

double frob(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

DecodeResult sdp_decode(const CensoredMeasurements& meas, const SdpConfig& cfg) {
  const Graph& g = meas.graph();
  int32_t n = g.n();
  if (g.m() == 0) fail_invalid("sdp_decode: graph has no edges");
  int32_t k = cfg.rank > 0
                  ? cfg.rank
                  : std::min<int32_t>(int32_t(std::ceil(std::sqrt(2.0 * n))) + 1, n);
  if (k < 2) fail_invalid("sdp_decode: rank must be at least 2");
  if (cfg.max_iterations < 1) fail_invalid("sdp_decode: max_iterations must be positive");
  if (!(cfg.grad_tol > 0.0)) fail_invalid("sdp_decode: gradient tolerance must be positive");

  SdpWork work{n, k, &g, &meas};
  double scale = std::max(1.0, signed_weight_matrix(meas).infnorm_rowsum());
  double tol_eff = cfg.grad_tol * scale;
  double step0 = cfg.initial_step > 0 ? cfg.initial_step : 1.0 / scale;

  RandomStream rs = split_stream(cfg.seed, hash_words({0x5d9bULL, cfg.stream}));
  std::vector<double> V(size_t(n) * k);
  for (auto& x : V) x = rs.next_gaussian();
  work.retract(V);

  std::vector<double> G(V.size()), cand(V.size()), prevV, prevG;
  bool converged = false;
  int64_t iters_left = cfg.max_iterations;

  for (int round = 0; round < 3; ++round) {
    double alpha = step0;
    prevV.clear();
    prevG.clear();
    while (iters_left-- > 0) {
      work.gradient_full(V, G);
      work.project_tangent(V, G);
      double gnorm = frob(G);
      if (gnorm <= tol_eff) {
        converged = true;
        break;
      }
      if (!prevV.empty()) {
        // Barzilai-Borwein step from the previous (V, G) pair
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < V.size(); ++i) {
          double dv = V[i] - prevV[i];
          double dg = G[i] - prevG[i];
          num += dv * dv;
          den += dv * dg;
        }
        if (den != 0.0 && std::isfinite(den)) alpha = std::abs(num / den);
        alpha = std::clamp(alpha, 1e-14 / scale, 1e8 / scale);
      }
      double obj = work.objective(V);
      double accepted = -1.0;
      for (int bt = 0; bt < 48; ++bt) {
        cand = V;
        for (size_t i = 0; i < V.size(); ++i) cand[i] += alpha * G[i];
        work.retract(cand);
        double cobj = work.objective(cand);
        if (cobj >= obj + 1e-4 * alpha * gnorm * gnorm) {
          accepted = cobj;
          break;
        }
        alpha *= 0.5;
      }
      prevV = V;
      prevG = G;
      if (accepted < 0) {
        // no ascent step found: gradient is numerically flat
        converged = gnorm <= std::max(tol_eff, 1e-7 * scale);
        break;
      }
      V.swap(cand);
    }

    // rank-1 test; a non-rank-1 stationary point may be a saddle, so perturb
    // and continue while budget remains
    DenseSymmetric B(k);
    for (int32_t a = 0; a < k; ++a)
      for (int32_t b = 0; b <= a; ++b) {
        double s = 0.0;
        for (int32_t i = 0; i < n; ++i) s += V[size_t(i) * k + a] * V[size_t(i) * k + b];
        B.set(a, b, s);
      }
    auto be = eig_dense(B, true);
    double s1 = std::sqrt(std::max(0.0, be.values[k - 1]));
    double s2 = std::sqrt(std::max(0.0, be.values[k - 2]));
    bool rank1 = s1 > 0 && s2 <= 1e-6 * s1;
    if (rank1 || !converged || iters_left <= 0) break;
    if (round < 2) {
      for (auto& x : V) x += 0.01 * rs.next_gaussian();
      work.retract(V);
      converged = false;
    }
  }

  // round through the top singular direction of V
  DenseSymmetric B(k);
  for (int32_t a = 0; a < k; ++a)
    for (int32_t b = 0; b <= a; ++b) {
      double s = 0.0;
      for (int32_t i = 0; i < n; ++i) s += V[size_t(i) * k + a] * V[size_t(i) * k + b];
      B.set(a, b, s);
    }
  auto be = eig_dense(B, true);
  double s1 = std::sqrt(std::max(0.0, be.values[k - 1]));
  double s2 = std::sqrt(std::max(0.0, be.values[k - 2]));
  const double* w = &be.vectors[size_t(k - 1) * k];

  std::vector<uint8_t> bits(n, 0);
  for (int32_t i = 0; i < n; ++i) {
    double u = 0.0;
    for (int32_t c = 0; c < k; ++c) u += V[size_t(i) * k + c] * w[c];
    bits[i] = u < 0.0 ? 1 : 0;
  }
  Assignment est = Assignment(std::move(bits)).canonical();

  DecodeResult r("sdp", est, work.objective(V));
  r.converged = converged;
  r.rank_one = (s1 > 0 && s2 <= 1e-6 * s1);
  return r;
}

DecodeResult spectral_decode(const CensoredMeasurements& meas) {
  const Graph& g = meas.graph();
  if (g.m() == 0) fail_invalid("spectral_decode: graph has no edges");
  SparseSymmetric w = signed_weight_matrix(meas);
  ExtremalEig top = extremal_eig(w, Extremal::Largest);
  std::vector<uint8_t> bits(g.n(), 0);
  for (int32_t i = 0; i < g.n(); ++i) bits[i] = top.vector[i] >= 0.0 ? 0 : 1;
  Assignment est = Assignment(std::move(bits)).canonical();
  DecodeResult r("spectral", est, quadratic_objective(meas, est));
  return r;
}

DecodeResult two_path_vote(const CensoredMeasurements& meas, int32_t center) {
  const Graph& g = meas.graph();
  int32_t n = g.n();
  if (center < 0) {
    center = 0;
    for (int32_t v = 1; v < n; ++v)
      if (g.degree(v) > g.degree(center)) center = v;
  } else if (center >= n) {
    fail_invalid("two_path_vote: center out of range");
  }

  auto sign_of = [&](int32_t a, int32_t b) -> int64_t {
    return meas.sign(g.edge_index(a, b));
  };

  std::vector<uint8_t> bits(n, 0);
  std::vector<int32_t> undecided;
  const auto& cadj = g.neighbors(center);
  for (int32_t v = 0; v < n; ++v) {
    if (v == center) continue;
    const auto& vadj = g.neighbors(v);
    int64_t margin = 0;
    size_t a = 0, b = 0;
    while (a < cadj.size() && b < vadj.size()) {
      if (cadj[a] < vadj[b]) {
        ++a;
      } else if (cadj[a] > vadj[b]) {
        ++b;
      } else {
        int32_t mid = cadj[a];
        if (mid != v && mid != center) margin += sign_of(center, mid) * sign_of(mid, v);
        ++a;
        ++b;
      }
    }
    if (margin > 0) {
      bits[v] = 0;
    } else if (margin < 0) {
      bits[v] = 1;
    } else {
      bits[v] = 0;
      undecided.push_back(v);
    }
  }

  Assignment est = Assignment(std::move(bits)).canonical();
  DecodeResult r("vote", est, quadratic_objective(meas, est));
  r.undecided = std::move(undecided);
  return r;
}

WitnessSets local_failure_witnesses(const Graph& g, const NoisePattern& z) {
  if (static_cast<int64_t>(z.z.size()) != g.m())
    fail_invalid("local_failure_witnesses: noise length mismatch");
  std::vector<int32_t> noisy(g.n(), 0);
  const auto& edges = g.edges();
  for (int64_t e = 0; e < g.m(); ++e)
    if (z.z[e]) {
      ++noisy[edges[e].u];
      ++noisy[edges[e].v];
    }
  WitnessSets out;
  for (int32_t v = 0; v < g.n(); ++v) {
    if (2 * noisy[v] > g.degree(v))
      out.strict.push_back(v);
    else if (2 * noisy[v] == g.degree(v))
      out.tie.push_back(v);
  }
  return out;
}

std::string decode_result_to_json(const DecodeResult& r) {
  nlohmann::json j;
  j["algorithm"] = r.algorithm;
  j["estimate"] = r.estimate.to_string();
  j["objective"] = r.objective;
  j["tie"] = r.tie;
  if (r.num_optimal_classes) j["num_optimal_classes"] = *r.num_optimal_classes;
  if (r.undecided) j["undecided"] = *r.undecided;
  if (r.certified) j["certified"] = *r.certified;
  if (r.lambda2) j["lambda2"] = *r.lambda2;
  if (r.converged) j["converged"] = *r.converged;
  if (r.rank_one) j["rank_one"] = *r.rank_one;
  return j.dump();
}

}  // namespace censync
