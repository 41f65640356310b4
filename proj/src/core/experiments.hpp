#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/decoders.hpp"

namespace censync {

enum class DecoderKind { Ml, Sdp, Spectral, Vote, Cert };

const char* decoder_name(DecoderKind k);
std::optional<DecoderKind> decoder_from_name(const std::string& name);

struct GraphSpec {
  enum class Kind { ErdosRenyi, Regular, File };
  Kind kind = Kind::ErdosRenyi;
  int32_t n = 0;
  double p = 0.0;
  int32_t d = 0;
  std::string path;
};

enum class TruthPolicy { Random, Zero };

struct TrialConfig {
  GraphSpec graph;
  double eps = 0.0;
  std::vector<DecoderKind> decoders;
  int32_t trials = 1;
  uint64_t seed = 0;
  TruthPolicy truth = TruthPolicy::Random;
  int32_t ml_cap = 24;
  SdpConfig sdp;  // seed/stream are re-derived per trial
  std::string variant = "sweep";
};

struct DecoderOutcome {
  bool success = false;
  int32_t agreement = -1;  // -1 for the certificate pseudo-decoder
};

/// Everything observed in one trial; reproducible from (config, index) alone.
struct TrialRecord {
  int32_t idx = 0;
  uint64_t seed = 0;
  int64_t m = 0;
  int32_t min_deg = 0;
  double avg_deg = 0.0;
  std::map<DecoderKind, DecoderOutcome> outcomes;
  double cert_lambda2 = 0.0;
  bool cert_ok = false;
  bool cert_evaluated = false;
  std::optional<int64_t> ml_cost_value;
  int32_t strict_witnesses = 0;
  int32_t tie_witnesses = 0;
};

/// Graph, truth and noise all derive from split streams keyed by the master
/// seed, the cell (graph spec, not eps) and the trial index, so trials stay
/// coupled across noise levels via common random numbers.
TrialRecord run_trial(const TrialConfig& cfg, int32_t idx);

std::vector<TrialRecord> run_cell_trials(const TrialConfig& cfg, int32_t jobs = 1);

struct SweepRow {
  std::string variant;
  int32_t n = 0;
  double p = 0.0;
  double eps = 0.0;
  std::string decoder;
  int32_t trials = 0;
  int32_t successes = 0;
  double ratio = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  uint64_t seed = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const std::vector<TrialConfig>& cells, int32_t jobs = 1);

struct WilsonInterval {
  double lo;
  double hi;
};

/// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(int32_t successes, int32_t trials);

std::string csv_string(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);
SweepResult parse_csv(const std::string& path);

/// Self-contained SVG with one polyline per (decoder, p, eps) series and an
/// optional dashed vertical line per reference abscissa.
void emit_svg(const SweepResult& result, const std::string& path,
              const std::vector<double>& reference_ns = {});

/// Smallest n >= 3 with p*n >= ratio * log n, or 0 when there is none below
/// the limit (or the ratio is not finite).
int32_t threshold_crossing_n(double p, double required_ratio, int32_t limit = 1000000);

struct FigureResult {
  SweepResult sweep;
  int32_t it_reference_n = 0;   // IT-sufficient rate, eps -> 1/2 form
  int32_t sdp_reference_n = 0;  // SDP rate, exact displayed form
  std::vector<TrialConfig> cells;
};

/// The phase-transition experiment: certificate-PSD ratio against n.
/// variant "top": p = 0.75, eps = 0.35, 500 trials scaled; variant "bottom":
/// p = 0.85, eps = 0.40, 100 trials scaled.
FigureResult figure_preset(const std::string& variant, double scale, int32_t jobs = 1,
                           uint64_t seed = 0, std::vector<int32_t> n_grid = {});

}  // namespace censync
