/* censync — censored edge-measurement simulation and decoding.
 *
 * C interface for the shared library. All functions that can fail return a
 * censync_status; on failure a message is available from
 * censync_last_error() (thread-local). Objects are opaque handles paired
 * with _free functions; strings returned through char** out-parameters are
 * released with censync_string_free().
 */
#ifndef CENSYNC_H
#define CENSYNC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum censync_status {
  CENSYNC_OK = 0,
  CENSYNC_EINVAL = 1,   /* bad arguments or violated preconditions */
  CENSYNC_EIO = 2,      /* file access or format problems */
  CENSYNC_ECOMPUTE = 3, /* caps exceeded, non-convergence */
} censync_status;

const char* censync_version(void);
const char* censync_last_error(void);
void censync_string_free(char* s);

/* ------------------------------------------------------------------ graphs */

typedef struct censync_graph censync_graph;

censync_status censync_graph_gen_er(int32_t n, double p, uint64_t seed,
                                    uint64_t stream, censync_graph** out);
censync_status censync_graph_gen_regular(int32_t n, int32_t d, uint64_t seed,
                                         uint64_t stream, censync_graph** out);
censync_status censync_graph_load(const char* path, censync_graph** out);
censync_status censync_graph_save(const censync_graph* g, const char* path);
void censync_graph_free(censync_graph* g);

int32_t censync_graph_n(const censync_graph* g);
int64_t censync_graph_m(const censync_graph* g);
censync_status censync_graph_edge(const censync_graph* g, int64_t index,
                                  int32_t* u, int32_t* v);
censync_status censync_graph_is_connected(const censync_graph* g, int* out);
censync_status censync_graph_min_degree(const censync_graph* g, int32_t* out);
/* exact Cheeger constant; pass 0 for the default enumeration cap (22) */
censync_status censync_graph_cheeger(const censync_graph* g, int32_t brute_force_cap,
                                     double* out);
/* d-regular graphs only */
censync_status censync_graph_spectral_lambdas(const censync_graph* g, double* lambda2,
                                              double* lambda_n);

/* ------------------------------------------------------------- assignments */

typedef struct censync_assignment censync_assignment;

censync_status censync_assignment_zeros(int32_t n, censync_assignment** out);
censync_status censync_assignment_random(int32_t n, uint64_t seed, uint64_t stream,
                                         censync_assignment** out);
censync_status censync_assignment_from_string(const char* bits, censync_assignment** out);
censync_status censync_assignment_to_string(const censync_assignment* a, char** out);
int32_t censync_assignment_size(const censync_assignment* a);
int censync_assignment_bit(const censync_assignment* a, int32_t i);
/* Hamming distance up to global flip; 0 means exact recovery */
censync_status censync_agreement_error(const censync_assignment* a,
                                       const censync_assignment* b, int32_t* out);
void censync_assignment_free(censync_assignment* a);

/* ------------------------------------------------------------ measurements */

typedef struct censync_measurements censync_measurements;

/* y_e = x_u xor x_v xor z_e, z_e ~ Bernoulli(eps) i.i.d., eps in [0, 1/2] */
censync_status censync_synthesize(const censync_graph* g, const censync_assignment* truth,
                                  double eps, uint64_t seed, uint64_t stream,
                                  censync_measurements** out);
censync_status censync_meas_load(const censync_graph* g, const char* path,
                                 censync_measurements** out);
censync_status censync_meas_save(const censync_measurements* m, const char* path);
int64_t censync_meas_count(const censync_measurements* m);
int censync_meas_bit(const censync_measurements* m, int64_t e);
void censync_meas_free(censync_measurements* m);

/* ---------------------------------------------------------------- decoding */

typedef struct censync_result censync_result;

typedef struct censync_sdp_options {
  int32_t rank;           /* 0: min(ceil(sqrt(2n)) + 1, n) */
  int64_t max_iterations; /* 0: default */
  double grad_tol;        /* 0: default */
  uint64_t seed;
  uint64_t stream;
} censync_sdp_options;

void censync_sdp_options_default(censync_sdp_options* opts);

censync_status censync_decode_ml(const censync_measurements* m, int32_t cap,
                                 censync_result** out); /* cap 0: default (24) */
censync_status censync_decode_sdp(const censync_measurements* m,
                                  const censync_sdp_options* opts, censync_result** out);
censync_status censync_decode_spectral(const censync_measurements* m, censync_result** out);
censync_status censync_decode_vote(const censync_measurements* m, int32_t center,
                                   censync_result** out); /* center -1: auto */

/* lambda2 of L_G - 2 L_H at the candidate; certified = strictly positive */
censync_status censync_certificate_check(const censync_measurements* m,
                                         const censync_assignment* candidate,
                                         double* lambda2, int* certified);

/* run the certificate at the result's estimate and record it on the result */
censync_status censync_result_attach_certificate(censync_result* r,
                                                 const censync_measurements* m);

censync_status censync_result_estimate(const censync_result* r, char** out);
double censync_result_objective(const censync_result* r);
int censync_result_tie(const censync_result* r);
int64_t censync_result_num_optimal_classes(const censync_result* r); /* -1 absent */
/* returns the undecided count; fills up to cap entries when out != NULL */
int64_t censync_result_undecided(const censync_result* r, int32_t* out, int64_t cap);
int censync_result_certified(const censync_result* r); /* -1 absent */
double censync_result_lambda2(const censync_result* r); /* NaN absent */
int censync_result_converged(const censync_result* r); /* -1 absent */
int censync_result_rank_one(const censync_result* r);  /* -1 absent */
censync_status censync_result_json(const censync_result* r, char** out);
void censync_result_free(censync_result* r);

/* -------------------------------------------------------------- thresholds */

typedef struct censync_threshold_report {
  char bound_name[32];
  /* inputs echoed; NaN when a field does not apply */
  double n, p, d, eps, tau, delta, lambda2, lambda_n, h_g, min_deg;
  double required_ratio;   /* exact displayed expression, per log n */
  double required_d;       /* absolute degree threshold when stated */
  double asymptotic_ratio; /* leading form, valid only as eps -> 1/2 */
  double expander_ratio;   /* regular SDP bound at lambda2 = lambda_n = 0 */
  double lhs, rhs;         /* sides of a predicate bound */
  int32_t verdict;         /* 1 satisfied, 0 not, -1 not a predicate */
  int32_t vacuous;
  char note[96];
} censync_threshold_report;

censync_status censync_kl_half(double eps, double* out);
censync_status censync_binary_entropy(double eps, double* out);
censync_status censync_threshold_necessary(double n, double tau, double eps,
                                           censync_threshold_report* out);
censync_status censync_threshold_er(double n, double d, double eps,
                                    censync_threshold_report* out);
censync_status censync_threshold_cheeger(double n, double min_deg, double h_g, double eps,
                                         censync_threshold_report* out);
censync_status censync_threshold_sdp_er(double eps, double delta,
                                        censync_threshold_report* out);
censync_status censync_threshold_sdp_regular(double eps, double delta, double lambda2,
                                             double lambda_n,
                                             censync_threshold_report* out);
censync_status censync_threshold_path_vote(double n, double p, double eps, double delta,
                                           censync_threshold_report* out);
censync_status censync_cheeger_inequality(double lambda2, double* lower, double* upper);

/* ------------------------------------------------------------------ sweeps */

typedef struct censync_sweep censync_sweep;

enum {
  CENSYNC_DECODER_ML = 1,
  CENSYNC_DECODER_SDP = 2,
  CENSYNC_DECODER_SPECTRAL = 4,
  CENSYNC_DECODER_VOTE = 8,
  CENSYNC_DECODER_CERT = 16,
};

typedef struct censync_sweep_spec {
  const int32_t* n_values;
  size_t n_count;
  const double* p_values; /* ER grids; ignored when regular_d > 0 */
  size_t p_count;
  int32_t regular_d; /* > 0: sweep d-regular graphs instead of ER */
  const double* eps_values;
  size_t eps_count;
  uint32_t decoders; /* CENSYNC_DECODER_* bitmask */
  int32_t trials;
  uint64_t seed;
  int32_t jobs;
  int32_t ml_cap;     /* 0: default (24) */
  int32_t truth_zero; /* 0: random ground truth, 1: all-zero */
  const char* variant;
} censync_sweep_spec;

censync_status censync_sweep_run(const censync_sweep_spec* spec, censync_sweep** out);

/* variant "top": p=0.75 eps=0.35 500 trials; "bottom": p=0.85 eps=0.40 100
 * trials; trial counts scaled by `scale` in (0,1]. Pass n_values = NULL for
 * the default grid 20,40,...,500. */
censync_status censync_figure_preset(const char* variant, double scale, int32_t jobs,
                                     uint64_t seed, const int32_t* n_values,
                                     size_t n_count, censync_sweep** out);

typedef struct censync_sweep_row {
  char variant[32];
  int32_t n;
  double p;
  double eps;
  char decoder[16];
  int32_t trials;
  int32_t successes;
  double ratio;
  double ci_lo; /* 95% Wilson interval */
  double ci_hi;
  uint64_t seed;
} censync_sweep_row;

size_t censync_sweep_rows(const censync_sweep* s);
censync_status censync_sweep_row_get(const censync_sweep* s, size_t index,
                                     censync_sweep_row* out);
/* reference abscissas when produced by a figure preset, else 0 */
int32_t censync_sweep_it_reference(const censync_sweep* s);
int32_t censync_sweep_sdp_reference(const censync_sweep* s);

censync_status censync_sweep_save_csv(const censync_sweep* s, const char* path);
censync_status censync_sweep_load_csv(const char* path, censync_sweep** out);
censync_status censync_sweep_csv_string(const censync_sweep* s, char** out);
censync_status censync_sweep_save_svg(const censync_sweep* s, const char* path,
                                      int with_references);
void censync_sweep_free(censync_sweep* s);

#ifdef __cplusplus
}
#endif

#endif /* CENSYNC_H */
