#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include <nlohmann/json.hpp>

#include "core/decoders.hpp"
#include "core/error.hpp"

using namespace censync;

namespace {

std::shared_ptr<const Graph> complete(int32_t n) {
  std::vector<Edge> edges;
  for (int32_t u = 0; u < n; ++u)
    for (int32_t v = u + 1; v < n; ++v) edges.push_back({u, v});
  return std::make_shared<Graph>(n, std::move(edges));
}

std::shared_ptr<const Graph> er(int32_t n, double p, uint64_t seed, uint64_t stream = 2222) {
  RandomStream rng = split_stream(seed, stream);
  return std::make_shared<Graph>(gen_erdos_renyi(n, p, rng));
}

// independent ML oracle: plain double loop over all assignments with bit0 = 0
struct MlOracle {
  int64_t best_cost;
  std::set<uint64_t> minimizers;  // masks over vertices 1..n-1
};

MlOracle ml_oracle(const CensoredMeasurements& meas) {
  const Graph& g = meas.graph();
  int32_t n = g.n();
  MlOracle out{std::numeric_limits<int64_t>::max(), {}};
  for (uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
    std::vector<uint8_t> bits(n, 0);
    for (int32_t v = 1; v < n; ++v) bits[v] = (mask >> (v - 1)) & 1;
    Assignment x(bits);
    int64_t cost = ml_cost(meas, x);
    if (cost < out.best_cost) {
      out.best_cost = cost;
      out.minimizers = {mask};
    } else if (cost == out.best_cost) {
      out.minimizers.insert(mask);
    }
  }
  return out;
}

uint64_t assignment_mask(const Assignment& a) {
  uint64_t mask = 0;
  for (int32_t v = 1; v < a.size(); ++v)
    if (a.bit(v)) mask |= 1ULL << (v - 1);
  return mask;
}

}  // namespace

TEST_CASE("ml on the noiseless triangle") {
  auto k3 = complete(3);
  CensoredMeasurements meas(k3, {0, 0, 0});
  DecodeResult r = ml_bruteforce(meas);
  CHECK(r.objective == 0.0);
  CHECK(*r.num_optimal_classes == 1);
  CHECK_FALSE(r.tie);
  CHECK(r.estimate.to_string() == "000");
}

TEST_CASE("ml on the one-flip triangle: three tied classes") {
  auto k3 = complete(3);
  CensoredMeasurements meas(k3, {1, 0, 0});
  DecodeResult r = ml_bruteforce(meas);
  CHECK(r.objective == 1.0);
  CHECK(*r.num_optimal_classes == 3);
  CHECK(r.tie);
  CHECK(r.estimate.to_string() == "000");  // lexicographically smallest of {000,010,011}

  MlOracle oracle = ml_oracle(meas);
  CHECK(oracle.best_cost == 1);
  CHECK(oracle.minimizers.size() == 3);
}

TEST_CASE("ml counts component-flip freedom") {
  auto g = std::make_shared<Graph>(4, std::vector<Edge>{{0, 1}, {2, 3}});
  CensoredMeasurements meas(g, {0, 0});
  DecodeResult r = ml_bruteforce(meas);
  CHECK(r.objective == 0.0);
  CHECK(*r.num_optimal_classes == 2);
  CHECK(r.tie);
}

TEST_CASE("ml enumeration cap") {
  auto g = std::make_shared<Graph>(25, std::vector<Edge>{{0, 1}});
  CensoredMeasurements meas(g, {0});
  CHECK_THROWS_AS(ml_bruteforce(meas), Error);
  CHECK_NOTHROW(ml_bruteforce(meas, 25));
}

TEST_CASE("ml agrees with the double-loop oracle on random instances") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    RandomStream rng = split_stream(seed, 14);
    int32_t n = 3 + int32_t(rng.uniform_below(8));  // 3..10
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, 0.6, rng));
    auto synth = synthesize(g, Assignment::random(n, rng), 0.25, rng);
    DecodeResult r = ml_bruteforce(synth.meas);
    MlOracle oracle = ml_oracle(synth.meas);
    CHECK(int64_t(r.objective) == oracle.best_cost);
    CHECK(*r.num_optimal_classes == int64_t(oracle.minimizers.size()));
    CHECK(assignment_mask(r.estimate) == *oracle.minimizers.begin());
  }
}

TEST_CASE("ml flip symmetry: cost(x) = cost(x xor 1)") {
  auto g = er(9, 0.5, 5);
  RandomStream rng = split_stream(1, 15);
  auto synth = synthesize(g, Assignment::random(9, rng), 0.3, rng);
  for (int rep = 0; rep < 50; ++rep) {
    Assignment x = Assignment::random(9, rng);
    CHECK(ml_cost(synth.meas, x) == ml_cost(synth.meas, x.flipped()));
  }
}

TEST_CASE("ml gauge equivariance of the minimizing class set") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    RandomStream rng = split_stream(seed, 16);
    int32_t n = 3 + int32_t(rng.uniform_below(7));  // 3..9
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, 0.5, rng));
    auto synth = synthesize(g, Assignment::random(n, rng), 0.3, rng);
    Assignment s = Assignment::random(n, rng);
    CensoredMeasurements shifted = gauge_transform(synth.meas, s);
    // every class cost shifts along with s
    for (uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
      std::vector<uint8_t> bits(n, 0);
      for (int32_t v = 1; v < n; ++v) bits[v] = (mask >> (v - 1)) & 1;
      Assignment x(bits);
      CHECK(ml_cost(shifted, x.xored(s)) == ml_cost(synth.meas, x));
    }
    DecodeResult a = ml_bruteforce(synth.meas);
    DecodeResult b = ml_bruteforce(shifted);
    CHECK(a.objective == b.objective);
    CHECK(*a.num_optimal_classes == *b.num_optimal_classes);
  }
}

TEST_CASE("certificate on noiseless connected graphs equals the spectral gap of L") {
  auto k3 = complete(3);
  CensoredMeasurements meas(k3, {0, 0, 0});
  CertificateVerdict v = certificate_check(meas, Assignment::zeros(3));
  CHECK(v.lambda2 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(v.certified);
}

TEST_CASE("certificate boundary fixtures") {
  auto k3 = complete(3);
  CensoredMeasurements one_flip(k3, {1, 0, 0});
  CertificateVerdict v = certificate_check(one_flip, Assignment::zeros(3));
  CHECK(std::abs(v.lambda2 - (-1.0)) <= 1e-9);
  CHECK_FALSE(v.certified);

  auto k4 = complete(4);
  std::vector<uint8_t> y(6, 0);
  y[0] = 1;  // flip edge (0,1)
  CensoredMeasurements k4_flip(k4, y);
  CertificateVerdict v2 = certificate_check(k4_flip, Assignment::zeros(4));
  CHECK(std::abs(v2.lambda2) <= 1e-9);
  CHECK_FALSE(v2.certified);
}

TEST_CASE("sdp on a single edge") {
  auto g = std::make_shared<Graph>(2, std::vector<Edge>{{0, 1}});
  CensoredMeasurements meas(g, {0});
  DecodeResult r = sdp_decode(meas);
  CHECK(r.estimate.to_string() == "00");
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(*r.converged);
  CHECK(*r.rank_one);
}

TEST_CASE("sdp on the noiseless K4") {
  auto k4 = complete(4);
  CensoredMeasurements meas(k4, std::vector<uint8_t>(6, 0));
  DecodeResult r = sdp_decode(meas);
  CHECK(r.estimate.to_string() == "0000");
  CHECK(r.objective == doctest::Approx(12.0).epsilon(1e-7));
}

TEST_CASE("sdp matches the ML class and closed-form objective when certified") {
  int certified_count = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    RandomStream rng = split_stream(seed, 17);
    int32_t n = 8 + int32_t(rng.uniform_below(7));  // 8..14
    double p = rng.bernoulli(0.5) ? 0.5 : 0.8;
    double eps = rng.bernoulli(0.5) ? 0.05 : 0.15;
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, p, rng));
    if (g->m() == 0) continue;
    Assignment truth = Assignment::random(n, rng);
    auto synth = synthesize(g, truth, eps, rng);
    CertificateVerdict cert = certificate_check(synth.meas, truth);
    if (!cert.certified) continue;
    ++certified_count;

    DecodeResult ml = ml_bruteforce(synth.meas);
    SdpConfig cfg;
    cfg.stream = seed;
    DecodeResult sdp = sdp_decode(synth.meas, cfg);
    CHECK(agreement_error(sdp.estimate, ml.estimate) == 0);
    double rank1_value = 2.0 * (double(g->m()) - 2.0 * ml.objective);
    CHECK(std::abs(sdp.objective - rank1_value) <= 1e-6 * double(g->m()));
  }
  CHECK(certified_count > 20);
}

TEST_CASE("sdp objective dominates the best rank-one value") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    RandomStream rng = split_stream(seed, 18);
    int32_t n = 6 + int32_t(rng.uniform_below(7));
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, 0.6, rng));
    if (g->m() == 0) continue;
    auto synth = synthesize(g, Assignment::random(n, rng), 0.3, rng);
    DecodeResult ml = ml_bruteforce(synth.meas);
    DecodeResult sdp = sdp_decode(synth.meas);
    CHECK(sdp.objective >= 2.0 * (double(g->m()) - 2.0 * ml.objective) - 1e-6);
  }
}

TEST_CASE("spectral decoder on a single edge with y = 1") {
  auto g = std::make_shared<Graph>(2, std::vector<Edge>{{0, 1}});
  CensoredMeasurements meas(g, {1});
  DecodeResult r = spectral_decode(meas);
  CHECK(r.estimate.to_string() == "01");
  CHECK_THROWS_AS(spectral_decode(CensoredMeasurements(
                      std::make_shared<Graph>(3, std::vector<Edge>{}), {})),
                  Error);
}

TEST_CASE("noiseless soundness of ml, sdp, spectral on connected instances") {
  int tested = 0;
  for (uint64_t seed = 0; tested < 30; ++seed) {
    RandomStream rng = split_stream(seed, 19);
    auto g = std::make_shared<Graph>(gen_erdos_renyi(12, 0.5, rng));
    if (!is_connected(*g)) continue;
    Assignment truth = Assignment::random(12, rng);
    auto synth = synthesize(g, truth, 0.0, rng);
    CHECK(agreement_error(ml_bruteforce(synth.meas).estimate, truth) == 0);
    CHECK(agreement_error(sdp_decode(synth.meas).estimate, truth) == 0);
    CHECK(agreement_error(spectral_decode(synth.meas).estimate, truth) == 0);
    CertificateVerdict cert = certificate_check(synth.meas, truth);
    CHECK(cert.certified);
    ++tested;
  }
}

TEST_CASE("voting on the noiseless triangle") {
  auto k3 = complete(3);
  CensoredMeasurements meas(k3, {0, 0, 0});
  DecodeResult r = two_path_vote(meas, 0);
  CHECK(r.estimate.to_string() == "000");
  CHECK(r.undecided->empty());
}

TEST_CASE("voting on K4 with edge (2,3) flipped: vertices 2 and 3 undecided") {
  auto k4 = complete(4);
  // canonical order: (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
  std::vector<uint8_t> y(6, 0);
  y[5] = 1;
  CensoredMeasurements meas(k4, y);
  DecodeResult r = two_path_vote(meas, 0);
  REQUIRE(r.undecided.has_value());
  CHECK(*r.undecided == std::vector<int32_t>{2, 3});
  CHECK(r.estimate.to_string() == "0000");  // margin(1) = +2, ties default to center
}

TEST_CASE("voting on a star graph: no 2-paths, all leaves undecided") {
  std::vector<Edge> edges;
  for (int32_t v = 1; v < 6; ++v) edges.push_back({0, v});
  auto star = std::make_shared<Graph>(6, edges);
  CensoredMeasurements meas(star, std::vector<uint8_t>(5, 0));
  DecodeResult r = two_path_vote(meas);  // hub 0 has max degree
  CHECK(r.undecided->size() == 5);
}

TEST_CASE("voting ignores the direct edge to the center") {
  auto k3 = complete(3);
  // y_(0,1) = 1 but both 2-paths say vertex 1 agrees with the center
  CensoredMeasurements meas(k3, {1, 0, 0});
  DecodeResult r = two_path_vote(meas, 0);
  // margin(1) = rho(0,2) * rho(2,1) = +1: decided, not undecided
  CHECK(std::find(r.undecided->begin(), r.undecided->end(), 1) == r.undecided->end());
  CHECK(r.estimate.bit(1) == r.estimate.bit(0));
}

TEST_CASE("voting center defaults to maximum degree, smallest index") {
  // vertex 1 and 2 both have degree 2; smallest wins
  auto g = std::make_shared<Graph>(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  CensoredMeasurements meas(g, {0, 0, 0});
  CHECK_NOTHROW(two_path_vote(meas));
  CHECK_THROWS_AS(two_path_vote(meas, 7), Error);
}

TEST_CASE("voting margins transform covariantly under gauge") {
  // The decided margins carry all the label information; their correctness is
  // preserved by any gauge shift. Undecided vertices stay undecided.
  int no_undecided_checked = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    RandomStream rng = split_stream(seed, 20);
    auto g = std::make_shared<Graph>(gen_erdos_renyi(14, 0.6, rng));
    Assignment truth = Assignment::random(14, rng);
    auto synth = synthesize(g, truth, 0.15, rng);
    Assignment s = Assignment::random(14, rng);

    DecodeResult plain = two_path_vote(synth.meas);
    DecodeResult shifted = two_path_vote(gauge_transform(synth.meas, s));
    REQUIRE(plain.undecided.has_value());
    CHECK(*plain.undecided == *shifted.undecided);

    // center is graph-determined, identical in both runs
    int32_t c = 0;
    for (int32_t v = 1; v < 14; ++v)
      if (g->degree(v) > g->degree(c)) c = v;

    std::vector<bool> undecided(14, false);
    for (int32_t v : *plain.undecided) undecided[v] = true;
    for (int32_t v = 0; v < 14; ++v) {
      if (undecided[v] || v == c) continue;
      uint8_t rel_plain = plain.estimate.bit(v) ^ plain.estimate.bit(c);
      uint8_t rel_shift = shifted.estimate.bit(v) ^ shifted.estimate.bit(c);
      CHECK(rel_shift == (rel_plain ^ s.bit(v) ^ s.bit(c)));
    }

    // with every vertex decided, the success indicator itself is invariant
    if (plain.undecided->empty()) {
      ++no_undecided_checked;
      bool ok_plain = agreement_error(plain.estimate, truth) == 0;
      bool ok_shifted = agreement_error(shifted.estimate, truth.xored(s)) == 0;
      CHECK(ok_plain == ok_shifted);
    }
  }
  CHECK(no_undecided_checked > 5);
}

TEST_CASE("local failure witnesses") {
  auto k3 = complete(3);
  WitnessSets none = local_failure_witnesses(*k3, NoisePattern{{0, 0, 0}});
  CHECK(none.strict.empty());
  CHECK(none.tie.empty());

  // one noisy edge on the triangle: both endpoints see 1 of 2 incident noisy
  WitnessSets one = local_failure_witnesses(*k3, NoisePattern{{1, 0, 0}});
  CHECK(one.strict.empty());
  CHECK(one.tie == std::vector<int32_t>{0, 1});

  CHECK_THROWS_AS(local_failure_witnesses(*k3, NoisePattern{{1, 0}}), Error);
}

TEST_CASE("strict witness implies ML tie or failure (500 random instances)") {
  int strict_seen = 0;
  for (uint64_t seed = 0; seed < 500; ++seed) {
    RandomStream rng = split_stream(seed, 23);
    int32_t n = 4 + int32_t(rng.uniform_below(7));  // 4..10
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, 0.5, rng));
    Assignment truth = Assignment::random(n, rng);
    auto synth = synthesize(g, truth, 0.3, rng);
    WitnessSets w = local_failure_witnesses(*g, synth.noise);
    if (w.strict.empty()) continue;
    ++strict_seen;
    DecodeResult ml = ml_bruteforce(synth.meas);
    bool failed_or_tied = ml.tie || agreement_error(ml.estimate, truth) != 0;
    CHECK(failed_or_tied);
  }
  CHECK(strict_seen > 50);
}

TEST_CASE("certificate implies a unique ML optimum at the certified class") {
  int certified = 0;
  for (uint64_t seed = 0; seed < 120; ++seed) {
    RandomStream rng = split_stream(seed, 24);
    int32_t n = 6 + int32_t(rng.uniform_below(7));
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, 0.6, rng));
    if (g->m() == 0) continue;
    Assignment truth = Assignment::random(n, rng);
    auto synth = synthesize(g, truth, 0.1, rng);
    CertificateVerdict cert = certificate_check(synth.meas, truth);
    if (!cert.certified) continue;
    ++certified;
    DecodeResult ml = ml_bruteforce(synth.meas);
    CHECK(*ml.num_optimal_classes == 1);
    CHECK(agreement_error(ml.estimate, truth) == 0);
  }
  CHECK(certified > 30);
}

TEST_CASE("decode result JSON carries the documented fields") {
  auto k3 = complete(3);
  CensoredMeasurements meas(k3, {1, 0, 0});
  DecodeResult r = ml_bruteforce(meas);
  auto j = nlohmann::json::parse(decode_result_to_json(r));
  CHECK(j["algorithm"] == "ml");
  CHECK(j["estimate"] == "000");
  CHECK(j["objective"] == 1.0);
  CHECK(j["tie"] == true);
  CHECK(j["num_optimal_classes"] == 3);
  CHECK_FALSE(j.contains("lambda2"));

  DecodeResult v = two_path_vote(meas);
  auto jv = nlohmann::json::parse(decode_result_to_json(v));
  CHECK(jv.contains("undecided"));

  DecodeResult s = sdp_decode(meas);
  auto js = nlohmann::json::parse(decode_result_to_json(s));
  CHECK(js.contains("converged"));
  CHECK(js.contains("rank_one"));
}
