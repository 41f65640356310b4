#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "core/error.hpp"
#include "core/measurement.hpp"

using namespace censync;

namespace {

std::shared_ptr<const Graph> complete(int32_t n) {
  std::vector<Edge> edges;
  for (int32_t u = 0; u < n; ++u)
    for (int32_t v = u + 1; v < n; ++v) edges.push_back({u, v});
  return std::make_shared<Graph>(n, std::move(edges));
}

std::shared_ptr<const Graph> random_er(int32_t n, double p, uint64_t seed) {
  RandomStream rng = split_stream(seed, 1000);
  return std::make_shared<Graph>(gen_erdos_renyi(n, p, rng));
}

}  // namespace

TEST_CASE("agreement_error basics") {
  Assignment a = Assignment::from_string("0000");
  Assignment b = Assignment::from_string("0011");
  CHECK(agreement_error(a, a) == 0);
  CHECK(agreement_error(a, a.flipped()) == 0);
  CHECK(agreement_error(a, b) == 2);
  Assignment c = Assignment::from_string("000");
  CHECK_THROWS_AS(agreement_error(a, c), Error);
}

TEST_CASE("assignment canonical form and string round trip") {
  Assignment a = Assignment::from_string("101");
  CHECK(a.canonical().to_string() == "010");
  CHECK(Assignment::from_string("010").canonical().to_string() == "010");
  CHECK_THROWS_AS(Assignment::from_string("01x"), Error);
}

TEST_CASE("synthesize with eps = 0 reproduces parities exactly") {
  auto g = complete(5);
  RandomStream rng = split_stream(0, 1);
  Assignment x = Assignment::from_string("01011");
  auto synth = synthesize(g, x, 0.0, rng);
  for (int64_t e = 0; e < g->m(); ++e) {
    const Edge& ed = g->edges()[e];
    CHECK(synth.meas.bit(e) == (x.bit(ed.u) ^ x.bit(ed.v)));
    CHECK(synth.noise.z[e] == 0);
  }
  Assignment zero = Assignment::zeros(5);
  auto synth0 = synthesize(g, zero, 0.0, rng);
  for (int64_t e = 0; e < g->m(); ++e) CHECK(synth0.meas.bit(e) == 0);
}

TEST_CASE("synthesize rejects eps outside [0, 1/2]") {
  auto g = complete(3);
  RandomStream rng = split_stream(0, 2);
  Assignment x = Assignment::zeros(3);
  CHECK_THROWS_AS(synthesize(g, x, 0.6, rng), Error);
  CHECK_THROWS_AS(synthesize(g, x, -0.01, rng), Error);
  Assignment wrong = Assignment::zeros(4);
  CHECK_THROWS_AS(synthesize(g, wrong, 0.1, rng), Error);
}

TEST_CASE("empirical flip fraction approaches eps") {
  auto g = random_er(500, 0.8, 3);  // ~100k edges
  REQUIRE(g->m() > 90000);
  RandomStream rng = split_stream(5, 3);
  Assignment x = Assignment::random(g->n(), rng);
  auto synth = synthesize(g, x, 0.35, rng);
  double flips = 0;
  for (int64_t e = 0; e < g->m(); ++e) flips += synth.noise.z[e];
  CHECK(std::abs(flips / double(g->m()) - 0.35) < 0.01);
}

TEST_CASE("censored block sampling at the deterministic corners") {
  auto g = complete(6);
  RandomStream rng = split_stream(0, 4);
  Assignment x = Assignment::from_string("000111");
  auto same_only = censored_block_sample(g, x, 1.0, 0.0, rng);
  auto cross_only = censored_block_sample(g, x, 0.0, 1.0, rng);
  for (const auto& e : g->edges()) {
    bool same = x.bit(e.u) == x.bit(e.v);
    CHECK(same_only.label(e.u, e.v) == (same ? TernaryLabel::One : TernaryLabel::Zero));
    CHECK(cross_only.label(e.u, e.v) == (same ? TernaryLabel::Zero : TernaryLabel::One));
  }
}

TEST_CASE("off-support pairs are Star") {
  auto g = std::make_shared<Graph>(4, std::vector<Edge>{{0, 1}});
  RandomStream rng = split_stream(0, 5);
  auto labels = censored_block_sample(g, Assignment::zeros(4), 0.5, 0.5, rng);
  CHECK(labels.label(2, 3) == TernaryLabel::Star);
  CHECK(labels.label(0, 2) == TernaryLabel::Star);
  CHECK(labels.label(0, 1) != TernaryLabel::Star);
}

TEST_CASE("symmetric block sampling matches the linear channel in distribution") {
  // q1 = eps, q2 = 1 - eps: per edge class, P(label = 1) must match P(y = 1)
  const double eps = 0.3;
  auto g = complete(8);
  Assignment x = Assignment::from_string("00001111");
  const int reps = 100;  // 100 * 28 edges = 2800 draws per sampler
  int64_t same_edges = 0, cross_edges = 0;
  for (const auto& e : g->edges())
    (x.bit(e.u) == x.bit(e.v) ? same_edges : cross_edges) += 1;

  int64_t block_same_ones = 0, block_cross_ones = 0;
  int64_t chan_same_ones = 0, chan_cross_ones = 0;
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream r1 = split_stream(100, rep);
    RandomStream r2 = split_stream(200, rep);
    auto labels = censored_block_sample(g, x, eps, 1.0 - eps, r1);
    auto meas = labels_to_measurements(labels);
    auto synth = synthesize(g, x, eps, r2);
    for (int64_t e = 0; e < g->m(); ++e) {
      const Edge& ed = g->edges()[e];
      bool same = x.bit(ed.u) == x.bit(ed.v);
      (same ? block_same_ones : block_cross_ones) += meas.bit(e);
      (same ? chan_same_ones : chan_cross_ones) += synth.meas.bit(e);
    }
  }
  double n_same = double(same_edges * reps);
  double n_cross = double(cross_edges * reps);
  double tol_same = 8.0 * std::sqrt(0.25 / n_same);
  double tol_cross = 8.0 * std::sqrt(0.25 / n_cross);
  CHECK(std::abs(block_same_ones / n_same - chan_same_ones / n_same) < tol_same);
  CHECK(std::abs(block_cross_ones / n_cross - chan_cross_ones / n_cross) < tol_cross);
  CHECK(std::abs(block_same_ones / n_same - eps) < tol_same);
  CHECK(std::abs(block_cross_ones / n_cross - (1 - eps)) < tol_cross);
}

TEST_CASE("signed weight matrix entries") {
  auto one_edge = std::make_shared<Graph>(2, std::vector<Edge>{{0, 1}});
  CensoredMeasurements y0(one_edge, {0});
  SparseSymmetric w0 = signed_weight_matrix(y0);
  CHECK(w0.to_dense().at(0, 1) == doctest::Approx(1.0));
  CHECK(w0.to_dense().at(0, 0) == doctest::Approx(0.0));
  CensoredMeasurements y1(one_edge, {1});
  CHECK(signed_weight_matrix(y1).to_dense().at(0, 1) == doctest::Approx(-1.0));

  // K3 noiseless with x = (0,1,0): y over ((0,1),(0,2),(1,2)) = (1,0,1)
  auto k3 = complete(3);
  RandomStream rng = split_stream(0, 6);
  auto synth = synthesize(k3, Assignment::from_string("010"), 0.0, rng);
  SparseSymmetric w = signed_weight_matrix(synth.meas);
  CHECK(w.to_dense().at(0, 1) == doctest::Approx(-1.0));
  CHECK(w.to_dense().at(0, 2) == doctest::Approx(1.0));
  CHECK(w.to_dense().at(1, 2) == doctest::Approx(-1.0));
}

TEST_CASE("error subgraph identities") {
  auto k3 = complete(3);
  RandomStream rng = split_stream(1, 7);
  Assignment truth = Assignment::from_string("010");
  auto synth = synthesize(k3, truth, 0.4, rng);

  // candidate = truth -> H is exactly the noise support
  EdgeSubset h = error_subgraph(synth.meas, truth);
  for (int64_t e = 0; e < k3->m(); ++e) CHECK(h.mask[e] == synth.noise.z[e]);

  // global flip leaves H unchanged
  EdgeSubset h2 = error_subgraph(synth.meas, truth.flipped());
  CHECK(h.mask == h2.mask);

  // triangle, y = (1,0,0), candidate = 0 -> H = {(0,1)}
  CensoredMeasurements meas(k3, {1, 0, 0});
  EdgeSubset h3 = error_subgraph(meas, Assignment::zeros(3));
  CHECK(h3.count == 1);
  CHECK(h3.mask[0] == 1);
  CHECK(h3.mask[1] == 0);
  CHECK(h3.mask[2] == 0);
}

TEST_CASE("certificate matrix fixtures") {
  auto k3 = complete(3);
  // noiseless, candidate = truth -> M = L_G
  RandomStream rng = split_stream(2, 8);
  auto synth = synthesize(k3, Assignment::zeros(3), 0.0, rng);
  DenseSymmetric m = certificate_matrix(synth.meas, Assignment::zeros(3)).to_dense();
  CHECK(m.at(0, 0) == doctest::Approx(2.0));
  CHECK(m.at(0, 1) == doctest::Approx(-1.0));

  // H = {(0,1)}: M = [[0,1,-1],[1,0,-1],[-1,-1,2]]
  CensoredMeasurements meas(k3, {1, 0, 0});
  DenseSymmetric m2 = certificate_matrix(meas, Assignment::zeros(3)).to_dense();
  CHECK(m2.at(0, 0) == doctest::Approx(0.0));
  CHECK(m2.at(0, 1) == doctest::Approx(1.0));
  CHECK(m2.at(0, 2) == doctest::Approx(-1.0));
  CHECK(m2.at(1, 1) == doctest::Approx(0.0));
  CHECK(m2.at(1, 2) == doctest::Approx(-1.0));
  CHECK(m2.at(2, 2) == doctest::Approx(2.0));
}

TEST_CASE("certificate matrix rows always sum to zero") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto g = random_er(10, 0.5, seed);
    if (g->m() == 0) continue;
    RandomStream rng = split_stream(seed, 9);
    Assignment truth = Assignment::random(10, rng);
    auto synth = synthesize(g, truth, 0.3, rng);
    Assignment cand = Assignment::random(10, rng);
    SparseSymmetric m = certificate_matrix(synth.meas, cand);
    std::vector<double> ones(10, 1.0), out(10);
    m.multiply(ones.data(), out.data());
    for (double v : out) CHECK(v == 0.0);
  }
}

TEST_CASE("gauge transform identities") {
  auto g = random_er(8, 0.6, 11);
  RandomStream rng = split_stream(0, 10);
  auto synth = synthesize(g, Assignment::random(8, rng), 0.25, rng);

  CensoredMeasurements id0 = gauge_transform(synth.meas, Assignment::zeros(8));
  CHECK(id0.bits() == synth.meas.bits());
  CensoredMeasurements id1 = gauge_transform(synth.meas, Assignment::zeros(8).flipped());
  CHECK(id1.bits() == synth.meas.bits());

  Assignment s = Assignment::random(8, rng);
  CensoredMeasurements twice = gauge_transform(gauge_transform(synth.meas, s), s);
  CHECK(twice.bits() == synth.meas.bits());
}

TEST_CASE("gauge covariance of the error subgraph and certificate") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    RandomStream rng = split_stream(seed, 12);
    int32_t n = 4 + int32_t(rng.uniform_below(9));  // 4..12
    auto g = std::make_shared<Graph>(gen_erdos_renyi(n, 0.5, rng));
    if (g->m() == 0) continue;
    auto synth = synthesize(g, Assignment::random(n, rng), 0.3, rng);
    Assignment cand = Assignment::random(n, rng);
    Assignment s = Assignment::random(n, rng);

    CensoredMeasurements shifted = gauge_transform(synth.meas, s);
    EdgeSubset h1 = error_subgraph(shifted, cand.xored(s));
    EdgeSubset h2 = error_subgraph(synth.meas, cand);
    CHECK(h1.mask == h2.mask);

    DenseSymmetric m1 = certificate_matrix(shifted, cand.xored(s)).to_dense();
    DenseSymmetric m2 = certificate_matrix(synth.meas, cand).to_dense();
    for (int32_t i = 0; i < n; ++i)
      for (int32_t j = 0; j <= i; ++j) CHECK(m1.at(i, j) == m2.at(i, j));
  }
}

TEST_CASE("|H| at the truth is binomial(m, eps)") {
  auto g = complete(10);  // m = 45
  const double eps = 0.2;
  const int trials = 10000;
  double total = 0;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng = split_stream(31, t);
    Assignment truth = Assignment::random(10, rng);
    auto synth = synthesize(g, truth, eps, rng);
    total += double(error_subgraph(synth.meas, truth).count);
  }
  double mean = total / trials;
  double sd_of_mean = std::sqrt(45 * eps * (1 - eps)) / std::sqrt(double(trials));
  CHECK(std::abs(mean - 45 * eps) < 3 * sd_of_mean);
}

TEST_CASE("coupled uniforms give monotone noise patterns across eps") {
  auto g = random_er(30, 0.4, 17);
  RandomStream rng = split_stream(9, 13);
  Assignment x = Assignment::random(30, rng);
  auto uniforms = draw_edge_uniforms(*g, rng);
  auto low = synthesize_from_uniforms(g, x, 0.1, uniforms);
  auto high = synthesize_from_uniforms(g, x, 0.4, uniforms);
  for (int64_t e = 0; e < g->m(); ++e)
    if (low.noise.z[e]) CHECK(high.noise.z[e]);  // noisy set grows with eps
}

TEST_CASE("measurement file round trip and error paths") {
  auto g = complete(3);
  CensoredMeasurements meas(g, {1, 0, 1});
  std::string path = "./meas_roundtrip.ym";
  save_measurements(meas, path);
  CensoredMeasurements back = load_measurements(g, path);
  CHECK(back.bits() == meas.bits());

  {
    std::ofstream out(path);
    out << "n 3 m 3\n0 1 1\n1 2 0\n0 2 1\n";  // wrong order
  }
  CHECK_THROWS_AS(load_measurements(g, path), Error);
  {
    std::ofstream out(path);
    out << "n 3 m 3\n0 1 1\n0 2 0\n";  // count mismatch
  }
  CHECK_THROWS_AS(load_measurements(g, path), Error);
  {
    std::ofstream out(path);
    out << "n 4 m 3\n0 1 1\n0 2 0\n1 2 1\n";  // n mismatch
  }
  CHECK_THROWS_AS(load_measurements(g, path), Error);
  {
    std::ofstream out(path);
    out << "n 3 m 3\n0 1 2\n0 2 0\n1 2 1\n";  // bad bit value
  }
  CHECK_THROWS_AS(load_measurements(g, path), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_measurements(g, "./missing.ym"), Error);
}
