#include "censync.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "core/decoders.hpp"
#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/graph.hpp"
#include "core/measurement.hpp"
#include "core/thresholds.hpp"

using namespace censync;

struct censync_graph {
  std::shared_ptr<const Graph> g;
};
struct censync_assignment {
  Assignment a;
};
struct censync_measurements {
  CensoredMeasurements m;
};
struct censync_result {
  DecodeResult r;
};
struct censync_sweep {
  SweepResult res;
  int32_t it_ref = 0;
  int32_t sdp_ref = 0;
};

namespace {

thread_local std::string g_last_error;

censync_status status_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument: return CENSYNC_EINVAL;
    case ErrorKind::Io: return CENSYNC_EIO;
    case ErrorKind::Compute: return CENSYNC_ECOMPUTE;
  }
  return CENSYNC_ECOMPUTE;
}

template <typename Fn>
censync_status wrap(Fn&& fn) {
  try {
    fn();
    return CENSYNC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CENSYNC_ECOMPUTE;
  } catch (...) {
    g_last_error = "unknown error";
    return CENSYNC_ECOMPUTE;
  }
}

censync_status invalid(const char* msg) {
  g_last_error = msg;
  return CENSYNC_EINVAL;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_field(char* dst, size_t cap, const std::string& src) {
  size_t len = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), len);
  dst[len] = '\0';
}

censync_threshold_report convert_report(const ThresholdReport& r) {
  censync_threshold_report out{};
  copy_field(out.bound_name, sizeof out.bound_name, r.bound_name);
  out.n = r.n;
  out.p = r.p;
  out.d = r.d;
  out.eps = r.eps;
  out.tau = r.tau;
  out.delta = r.delta;
  out.lambda2 = r.lambda2;
  out.lambda_n = r.lambda_n;
  out.h_g = r.h_g;
  out.min_deg = r.min_deg;
  out.required_ratio = r.required_ratio;
  out.required_d = r.required_d;
  out.asymptotic_ratio = r.asymptotic_ratio;
  out.expander_ratio = r.expander_ratio;
  out.lhs = r.lhs;
  out.rhs = r.rhs;
  out.verdict = r.verdict;
  out.vacuous = r.vacuous ? 1 : 0;
  copy_field(out.note, sizeof out.note, r.note);
  return out;
}

}  // namespace

extern "C" {

const char* censync_version(void) { return "1.0.0"; }

const char* censync_last_error(void) { return g_last_error.c_str(); }

void censync_string_free(char* s) { std::free(s); }

/* ---- graphs ---- */

censync_status censync_graph_gen_er(int32_t n, double p, uint64_t seed, uint64_t stream,
                                    censync_graph** out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] {
    RandomStream rng = split_stream(seed, stream);
    *out = new censync_graph{std::make_shared<Graph>(gen_erdos_renyi(n, p, rng))};
  });
}

censync_status censync_graph_gen_regular(int32_t n, int32_t d, uint64_t seed,
                                         uint64_t stream, censync_graph** out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] {
    RandomStream rng = split_stream(seed, stream);
    *out = new censync_graph{std::make_shared<Graph>(gen_random_regular(n, d, rng))};
  });
}

censync_status censync_graph_load(const char* path, censync_graph** out) {
  if (!out || !path) return invalid("null argument");
  return wrap([&] { *out = new censync_graph{std::make_shared<Graph>(load_graph(path))}; });
}

censync_status censync_graph_save(const censync_graph* g, const char* path) {
  if (!g || !path) return invalid("null argument");
  return wrap([&] { save_graph(*g->g, path); });
}

void censync_graph_free(censync_graph* g) { delete g; }

int32_t censync_graph_n(const censync_graph* g) { return g ? g->g->n() : 0; }
int64_t censync_graph_m(const censync_graph* g) { return g ? g->g->m() : 0; }

censync_status censync_graph_edge(const censync_graph* g, int64_t index, int32_t* u,
                                  int32_t* v) {
  if (!g || !u || !v) return invalid("null argument");
  if (index < 0 || index >= g->g->m()) return invalid("edge index out of range");
  *u = g->g->edges()[index].u;
  *v = g->g->edges()[index].v;
  return CENSYNC_OK;
}

censync_status censync_graph_is_connected(const censync_graph* g, int* out) {
  if (!g || !out) return invalid("null argument");
  return wrap([&] { *out = is_connected(*g->g) ? 1 : 0; });
}

censync_status censync_graph_min_degree(const censync_graph* g, int32_t* out) {
  if (!g || !out) return invalid("null argument");
  return wrap([&] { *out = g->g->min_degree(); });
}

censync_status censync_graph_cheeger(const censync_graph* g, int32_t brute_force_cap,
                                     double* out) {
  if (!g || !out) return invalid("null argument");
  return wrap([&] {
    *out = cheeger_constant(*g->g, brute_force_cap > 0 ? brute_force_cap : 22);
  });
}

censync_status censync_graph_spectral_lambdas(const censync_graph* g, double* lambda2,
                                              double* lambda_n) {
  if (!g || !lambda2 || !lambda_n) return invalid("null argument");
  return wrap([&] {
    SpectralLambdas s = spectral_lambdas(*g->g);
    *lambda2 = s.lambda2;
    *lambda_n = s.lambda_n;
  });
}

/* ---- assignments ---- */

censync_status censync_assignment_zeros(int32_t n, censync_assignment** out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = new censync_assignment{Assignment::zeros(n)}; });
}

censync_status censync_assignment_random(int32_t n, uint64_t seed, uint64_t stream,
                                         censync_assignment** out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] {
    RandomStream rng = split_stream(seed, stream);
    *out = new censync_assignment{Assignment::random(n, rng)};
  });
}

censync_status censync_assignment_from_string(const char* bits, censync_assignment** out) {
  if (!out || !bits) return invalid("null argument");
  return wrap([&] { *out = new censync_assignment{Assignment::from_string(bits)}; });
}

censync_status censync_assignment_to_string(const censync_assignment* a, char** out) {
  if (!a || !out) return invalid("null argument");
  return wrap([&] { *out = copy_string(a->a.to_string()); });
}

int32_t censync_assignment_size(const censync_assignment* a) { return a ? a->a.size() : 0; }

int censync_assignment_bit(const censync_assignment* a, int32_t i) {
  if (!a || i < 0 || i >= a->a.size()) return -1;
  return a->a.bit(i);
}

censync_status censync_agreement_error(const censync_assignment* a,
                                       const censync_assignment* b, int32_t* out) {
  if (!a || !b || !out) return invalid("null argument");
  return wrap([&] { *out = agreement_error(a->a, b->a); });
}

void censync_assignment_free(censync_assignment* a) { delete a; }

/* ---- measurements ---- */

censync_status censync_synthesize(const censync_graph* g, const censync_assignment* truth,
                                  double eps, uint64_t seed, uint64_t stream,
                                  censync_measurements** out) {
  if (!g || !truth || !out) return invalid("null argument");
  return wrap([&] {
    RandomStream rng = split_stream(seed, stream);
    auto synth = synthesize(g->g, truth->a, eps, rng);
    *out = new censync_measurements{std::move(synth.meas)};
  });
}

censync_status censync_meas_load(const censync_graph* g, const char* path,
                                 censync_measurements** out) {
  if (!g || !path || !out) return invalid("null argument");
  return wrap([&] { *out = new censync_measurements{load_measurements(g->g, path)}; });
}

censync_status censync_meas_save(const censync_measurements* m, const char* path) {
  if (!m || !path) return invalid("null argument");
  return wrap([&] { save_measurements(m->m, path); });
}

int64_t censync_meas_count(const censync_measurements* m) { return m ? m->m.m() : 0; }

int censync_meas_bit(const censync_measurements* m, int64_t e) {
  if (!m || e < 0 || e >= m->m.m()) return -1;
  return m->m.bit(e);
}

void censync_meas_free(censync_measurements* m) { delete m; }

/* ---- decoding ---- */

void censync_sdp_options_default(censync_sdp_options* opts) {
  if (!opts) return;
  SdpConfig d;
  opts->rank = d.rank;
  opts->max_iterations = d.max_iterations;
  opts->grad_tol = d.grad_tol;
  opts->seed = d.seed;
  opts->stream = d.stream;
}

censync_status censync_decode_ml(const censync_measurements* m, int32_t cap,
                                 censync_result** out) {
  if (!m || !out) return invalid("null argument");
  return wrap([&] {
    *out = new censync_result{ml_bruteforce(m->m, cap > 0 ? cap : 24)};
  });
}

censync_status censync_decode_sdp(const censync_measurements* m,
                                  const censync_sdp_options* opts, censync_result** out) {
  if (!m || !out) return invalid("null argument");
  return wrap([&] {
    SdpConfig cfg;
    if (opts) {
      if (opts->rank > 0) cfg.rank = opts->rank;
      if (opts->max_iterations > 0) cfg.max_iterations = opts->max_iterations;
      if (opts->grad_tol > 0) cfg.grad_tol = opts->grad_tol;
      cfg.seed = opts->seed;
      cfg.stream = opts->stream;
    }
    *out = new censync_result{sdp_decode(m->m, cfg)};
  });
}

censync_status censync_decode_spectral(const censync_measurements* m, censync_result** out) {
  if (!m || !out) return invalid("null argument");
  return wrap([&] { *out = new censync_result{spectral_decode(m->m)}; });
}

censync_status censync_decode_vote(const censync_measurements* m, int32_t center,
                                   censync_result** out) {
  if (!m || !out) return invalid("null argument");
  return wrap([&] { *out = new censync_result{two_path_vote(m->m, center)}; });
}

censync_status censync_certificate_check(const censync_measurements* m,
                                         const censync_assignment* candidate,
                                         double* lambda2, int* certified) {
  if (!m || !candidate || !lambda2 || !certified) return invalid("null argument");
  return wrap([&] {
    CertificateVerdict v = certificate_check(m->m, candidate->a);
    *lambda2 = v.lambda2;
    *certified = v.certified ? 1 : 0;
  });
}

censync_status censync_result_attach_certificate(censync_result* r,
                                                 const censync_measurements* m) {
  if (!r || !m) return invalid("null argument");
  return wrap([&] {
    CertificateVerdict v = certificate_check(m->m, r->r.estimate);
    r->r.lambda2 = v.lambda2;
    r->r.certified = v.certified;
  });
}

censync_status censync_result_estimate(const censync_result* r, char** out) {
  if (!r || !out) return invalid("null argument");
  return wrap([&] { *out = copy_string(r->r.estimate.to_string()); });
}

double censync_result_objective(const censync_result* r) {
  return r ? r->r.objective : std::numeric_limits<double>::quiet_NaN();
}

int censync_result_tie(const censync_result* r) { return r ? (r->r.tie ? 1 : 0) : -1; }

int64_t censync_result_num_optimal_classes(const censync_result* r) {
  if (!r || !r->r.num_optimal_classes) return -1;
  return *r->r.num_optimal_classes;
}

int64_t censync_result_undecided(const censync_result* r, int32_t* out, int64_t cap) {
  if (!r || !r->r.undecided) return -1;
  const auto& u = *r->r.undecided;
  if (out) {
    int64_t k = std::min<int64_t>(cap, static_cast<int64_t>(u.size()));
    for (int64_t i = 0; i < k; ++i) out[i] = u[i];
  }
  return static_cast<int64_t>(u.size());
}

int censync_result_certified(const censync_result* r) {
  if (!r || !r->r.certified) return -1;
  return *r->r.certified ? 1 : 0;
}

double censync_result_lambda2(const censync_result* r) {
  if (!r || !r->r.lambda2) return std::numeric_limits<double>::quiet_NaN();
  return *r->r.lambda2;
}

int censync_result_converged(const censync_result* r) {
  if (!r || !r->r.converged) return -1;
  return *r->r.converged ? 1 : 0;
}

int censync_result_rank_one(const censync_result* r) {
  if (!r || !r->r.rank_one) return -1;
  return *r->r.rank_one ? 1 : 0;
}

censync_status censync_result_json(const censync_result* r, char** out) {
  if (!r || !out) return invalid("null argument");
  return wrap([&] { *out = copy_string(decode_result_to_json(r->r)); });
}

void censync_result_free(censync_result* r) { delete r; }

/* ---- thresholds ---- */

censync_status censync_kl_half(double eps, double* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = kl_half(eps); });
}

censync_status censync_binary_entropy(double eps, double* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = binary_entropy(eps); });
}

censync_status censync_threshold_necessary(double n, double tau, double eps,
                                           censync_threshold_report* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = convert_report(necessary_bound(n, tau, eps)); });
}

censync_status censync_threshold_er(double n, double d, double eps,
                                    censync_threshold_report* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = convert_report(er_sufficient_check(n, d, eps)); });
}

censync_status censync_threshold_cheeger(double n, double min_deg, double h_g, double eps,
                                         censync_threshold_report* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = convert_report(cheeger_sufficient_check(n, min_deg, h_g, eps)); });
}

censync_status censync_threshold_sdp_er(double eps, double delta,
                                        censync_threshold_report* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = convert_report(sdp_er_bound(eps, delta)); });
}

censync_status censync_threshold_sdp_regular(double eps, double delta, double lambda2,
                                             double lambda_n,
                                             censync_threshold_report* out) {
  if (!out) return invalid("null output pointer");
  return wrap(
      [&] { *out = convert_report(sdp_regular_bound(eps, delta, lambda2, lambda_n)); });
}

censync_status censync_threshold_path_vote(double n, double p, double eps, double delta,
                                           censync_threshold_report* out) {
  if (!out) return invalid("null output pointer");
  return wrap([&] { *out = convert_report(path_vote_check(n, p, eps, delta)); });
}

censync_status censync_cheeger_inequality(double lambda2, double* lower, double* upper) {
  if (!lower || !upper) return invalid("null argument");
  return wrap([&] {
    auto [lo, hi] = cheeger_inequality_bounds(lambda2);
    *lower = lo;
    *upper = hi;
  });
}

/* ---- sweeps ---- */

censync_status censync_sweep_run(const censync_sweep_spec* spec, censync_sweep** out) {
  if (!spec || !out) return invalid("null argument");
  if (!spec->n_values || spec->n_count == 0) return invalid("sweep: empty n grid");
  if (spec->regular_d <= 0 && (!spec->p_values || spec->p_count == 0))
    return invalid("sweep: empty p grid");
  if (!spec->eps_values || spec->eps_count == 0) return invalid("sweep: empty eps grid");
  if (spec->trials < 1) return invalid("sweep: trials must be positive");
  if (spec->decoders == 0) return invalid("sweep: no decoders selected");
  return wrap([&] {
    std::vector<DecoderKind> kinds;
    if (spec->decoders & CENSYNC_DECODER_ML) kinds.push_back(DecoderKind::Ml);
    if (spec->decoders & CENSYNC_DECODER_SDP) kinds.push_back(DecoderKind::Sdp);
    if (spec->decoders & CENSYNC_DECODER_SPECTRAL) kinds.push_back(DecoderKind::Spectral);
    if (spec->decoders & CENSYNC_DECODER_VOTE) kinds.push_back(DecoderKind::Vote);
    if (spec->decoders & CENSYNC_DECODER_CERT) kinds.push_back(DecoderKind::Cert);

    std::vector<TrialConfig> cells;
    size_t p_count = spec->regular_d > 0 ? 1 : spec->p_count;
    for (size_t ni = 0; ni < spec->n_count; ++ni)
      for (size_t pi = 0; pi < p_count; ++pi)
        for (size_t ei = 0; ei < spec->eps_count; ++ei) {
          TrialConfig cfg;
          if (spec->regular_d > 0)
            cfg.graph = GraphSpec{GraphSpec::Kind::Regular, spec->n_values[ni], 0.0,
                                  spec->regular_d, ""};
          else
            cfg.graph = GraphSpec{GraphSpec::Kind::ErdosRenyi, spec->n_values[ni],
                                  spec->p_values[pi], 0, ""};
          cfg.eps = spec->eps_values[ei];
          cfg.decoders = kinds;
          cfg.trials = spec->trials;
          cfg.seed = spec->seed;
          cfg.truth = spec->truth_zero ? TruthPolicy::Zero : TruthPolicy::Random;
          if (spec->ml_cap > 0) cfg.ml_cap = spec->ml_cap;
          cfg.variant = spec->variant ? spec->variant : "sweep";
          cells.push_back(std::move(cfg));
        }
    auto res = run_sweep(cells, spec->jobs > 0 ? spec->jobs : 1);
    *out = new censync_sweep{std::move(res), 0, 0};
  });
}

censync_status censync_figure_preset(const char* variant, double scale, int32_t jobs,
                                     uint64_t seed, const int32_t* n_values, size_t n_count,
                                     censync_sweep** out) {
  if (!variant || !out) return invalid("null argument");
  return wrap([&] {
    std::vector<int32_t> grid;
    if (n_values && n_count > 0) grid.assign(n_values, n_values + n_count);
    FigureResult fig = figure_preset(variant, scale, jobs > 0 ? jobs : 1, seed, grid);
    *out = new censync_sweep{std::move(fig.sweep), fig.it_reference_n, fig.sdp_reference_n};
  });
}

size_t censync_sweep_rows(const censync_sweep* s) { return s ? s->res.rows.size() : 0; }

censync_status censync_sweep_row_get(const censync_sweep* s, size_t index,
                                     censync_sweep_row* out) {
  if (!s || !out) return invalid("null argument");
  if (index >= s->res.rows.size()) return invalid("row index out of range");
  const SweepRow& r = s->res.rows[index];
  copy_field(out->variant, sizeof out->variant, r.variant);
  out->n = r.n;
  out->p = r.p;
  out->eps = r.eps;
  copy_field(out->decoder, sizeof out->decoder, r.decoder);
  out->trials = r.trials;
  out->successes = r.successes;
  out->ratio = r.ratio;
  out->ci_lo = r.ci_lo;
  out->ci_hi = r.ci_hi;
  out->seed = r.seed;
  return CENSYNC_OK;
}

int32_t censync_sweep_it_reference(const censync_sweep* s) { return s ? s->it_ref : 0; }
int32_t censync_sweep_sdp_reference(const censync_sweep* s) { return s ? s->sdp_ref : 0; }

censync_status censync_sweep_save_csv(const censync_sweep* s, const char* path) {
  if (!s || !path) return invalid("null argument");
  return wrap([&] { emit_csv(s->res, path); });
}

censync_status censync_sweep_load_csv(const char* path, censync_sweep** out) {
  if (!path || !out) return invalid("null argument");
  return wrap([&] { *out = new censync_sweep{parse_csv(path), 0, 0}; });
}

censync_status censync_sweep_csv_string(const censync_sweep* s, char** out) {
  if (!s || !out) return invalid("null argument");
  return wrap([&] { *out = copy_string(csv_string(s->res)); });
}

censync_status censync_sweep_save_svg(const censync_sweep* s, const char* path,
                                      int with_references) {
  if (!s || !path) return invalid("null argument");
  return wrap([&] {
    std::vector<double> refs;
    if (with_references) {
      if (s->it_ref > 0) refs.push_back(s->it_ref);
      if (s->sdp_ref > 0) refs.push_back(s->sdp_ref);
    }
    emit_svg(s->res, path, refs);
  });
}

void censync_sweep_free(censync_sweep* s) { delete s; }

}  // extern "C"
