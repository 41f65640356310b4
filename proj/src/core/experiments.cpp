#include "core/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/thresholds.hpp"

namespace censync {

const char* decoder_name(DecoderKind k) {
  switch (k) {
    case DecoderKind::Ml: return "ml";
    case DecoderKind::Sdp: return "sdp";
    case DecoderKind::Spectral: return "spectral";
    case DecoderKind::Vote: return "vote";
    case DecoderKind::Cert: return "cert";
  }
  return "?";
}

std::optional<DecoderKind> decoder_from_name(const std::string& name) {
  if (name == "ml") return DecoderKind::Ml;
  if (name == "sdp") return DecoderKind::Sdp;
  if (name == "spectral") return DecoderKind::Spectral;
  if (name == "vote") return DecoderKind::Vote;
  if (name == "cert") return DecoderKind::Cert;
  return std::nullopt;
}

namespace {

uint64_t bits_of(double x) {
  uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return u;
}

uint64_t cell_key(const GraphSpec& spec) {
  uint64_t path_hash = 0;
  for (char c : spec.path) path_hash = mix64(path_hash ^ uint64_t(uint8_t(c)));
  return hash_words({uint64_t(spec.kind), uint64_t(uint32_t(spec.n)), bits_of(spec.p),
                     uint64_t(uint32_t(spec.d)), path_hash});
}

std::shared_ptr<const Graph> build_graph(const GraphSpec& spec, RandomStream& rng) {
  switch (spec.kind) {
    case GraphSpec::Kind::ErdosRenyi:
      return std::make_shared<Graph>(gen_erdos_renyi(spec.n, spec.p, rng));
    case GraphSpec::Kind::Regular:
      return std::make_shared<Graph>(gen_random_regular(spec.n, spec.d, rng));
    case GraphSpec::Kind::File:
      return std::make_shared<Graph>(load_graph(spec.path));
  }
  fail_invalid("build_graph: unknown graph kind");
}

void parallel_for(int64_t total, int32_t jobs, const std::function<void(int64_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || total <= 1) {
    for (int64_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&]() {
    while (true) {
      int64_t i = next.fetch_add(1);
      if (i >= total || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int32_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

TrialRecord run_trial(const TrialConfig& cfg, int32_t idx) {
  if (cfg.trials < 1) fail_invalid("run_trial: trial count must be positive");
  if (!(cfg.eps >= 0.0) || !(cfg.eps <= 0.5)) fail_invalid("run_trial: eps outside [0, 1/2]");
  uint64_t key = cell_key(cfg.graph);
  auto stream_for = [&](uint64_t channel) {
    return split_stream(cfg.seed, hash_words({key, uint64_t(uint32_t(idx)), channel}));
  };

  RandomStream graph_rng = stream_for(0);
  std::shared_ptr<const Graph> g = build_graph(cfg.graph, graph_rng);
  int32_t n = g->n();

  RandomStream truth_rng = stream_for(1);
  Assignment truth = cfg.truth == TruthPolicy::Random ? Assignment::random(n, truth_rng)
                                                      : Assignment::zeros(n);

  RandomStream noise_rng = stream_for(2);
  auto uniforms = draw_edge_uniforms(*g, noise_rng);
  auto synth = synthesize_from_uniforms(g, truth, cfg.eps, uniforms);

  TrialRecord rec;
  rec.idx = idx;
  rec.seed = cfg.seed;
  rec.m = g->m();
  rec.min_deg = g->min_degree();
  rec.avg_deg = g->avg_degree();

  WitnessSets witnesses = local_failure_witnesses(*g, synth.noise);
  rec.strict_witnesses = static_cast<int32_t>(witnesses.strict.size());
  rec.tie_witnesses = static_cast<int32_t>(witnesses.tie.size());

  for (DecoderKind kind : cfg.decoders) {
    DecoderOutcome out;
    switch (kind) {
      case DecoderKind::Ml: {
        DecodeResult r = ml_bruteforce(synth.meas, cfg.ml_cap);
        out.agreement = agreement_error(r.estimate, truth);
        out.success = out.agreement == 0;
        rec.ml_cost_value = int64_t(r.objective);
        break;
      }
      case DecoderKind::Sdp: {
        SdpConfig sc = cfg.sdp;
        sc.seed = cfg.seed;
        sc.stream = hash_words({key, uint64_t(uint32_t(idx)), 3});
        DecodeResult r = sdp_decode(synth.meas, sc);
        out.agreement = agreement_error(r.estimate, truth);
        out.success = out.agreement == 0;
        break;
      }
      case DecoderKind::Spectral: {
        DecodeResult r = spectral_decode(synth.meas);
        out.agreement = agreement_error(r.estimate, truth);
        out.success = out.agreement == 0;
        break;
      }
      case DecoderKind::Vote: {
        DecodeResult r = two_path_vote(synth.meas);
        out.agreement = agreement_error(r.estimate, truth);
        out.success = out.agreement == 0;
        break;
      }
      case DecoderKind::Cert: {
        CertificateVerdict v = certificate_check(synth.meas, truth);
        rec.cert_lambda2 = v.lambda2;
        rec.cert_ok = v.certified;
        rec.cert_evaluated = true;
        out.success = v.certified;
        out.agreement = -1;
        break;
      }
    }
    rec.outcomes[kind] = out;
  }
  return rec;
}

std::vector<TrialRecord> run_cell_trials(const TrialConfig& cfg, int32_t jobs) {
  std::vector<TrialRecord> records(cfg.trials);
  parallel_for(cfg.trials, jobs,
               [&](int64_t i) { records[i] = run_trial(cfg, static_cast<int32_t>(i)); });
  return records;
}

WilsonInterval wilson_interval(int32_t successes, int32_t trials) {
  if (trials < 1) fail_invalid("wilson_interval: trials must be positive");
  if (successes < 0 || successes > trials)
    fail_invalid("wilson_interval: successes out of range");
  const double z = 1.959963984540054;  // 95%
  double t = trials;
  double phat = double(successes) / t;
  double z2 = z * z;
  double denom = 1.0 + z2 / t;
  double center = (phat + z2 / (2.0 * t)) / denom;
  double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  return WilsonInterval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

SweepResult run_sweep(const std::vector<TrialConfig>& cells, int32_t jobs) {
  if (cells.empty()) fail_invalid("run_sweep: empty grid");
  // flatten (cell, trial) pairs so the pool balances across uneven cells
  std::vector<std::pair<int32_t, int32_t>> tasks;
  std::vector<std::vector<TrialRecord>> records(cells.size());
  for (size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].trials < 1) fail_invalid("run_sweep: trial count must be positive");
    records[c].resize(cells[c].trials);
    for (int32_t i = 0; i < cells[c].trials; ++i)
      tasks.emplace_back(static_cast<int32_t>(c), i);
  }
  parallel_for(static_cast<int64_t>(tasks.size()), jobs, [&](int64_t t) {
    auto [c, i] = tasks[t];
    records[c][i] = run_trial(cells[c], i);
  });

  SweepResult out;
  for (size_t c = 0; c < cells.size(); ++c) {
    const TrialConfig& cfg = cells[c];
    int32_t n = cfg.graph.n;
    if (cfg.graph.kind == GraphSpec::Kind::File && !records[c].empty()) {
      // recover n from a loaded record: m and degrees are known, n is not;
      // load once to keep the row meaningful
      n = load_graph(cfg.graph.path).n();
    }
    for (DecoderKind kind : cfg.decoders) {
      SweepRow row;
      row.variant = cfg.variant;
      row.n = n;
      row.p = cfg.graph.kind == GraphSpec::Kind::ErdosRenyi
                  ? cfg.graph.p
                  : std::numeric_limits<double>::quiet_NaN();
      row.eps = cfg.eps;
      row.decoder = decoder_name(kind);
      row.trials = cfg.trials;
      row.successes = 0;
      for (const auto& rec : records[c])
        row.successes += rec.outcomes.at(kind).success ? 1 : 0;
      row.ratio = double(row.successes) / double(row.trials);
      WilsonInterval ci = wilson_interval(row.successes, row.trials);
      row.ci_lo = ci.lo;
      row.ci_hi = ci.hi;
      row.seed = cfg.seed;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

namespace {

// shortest decimal that parses back to the same double
std::string fmt_double(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = std::strtod(buf, nullptr);
    if (back == x || (std::isnan(back) && std::isnan(x))) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string csv_string(const SweepResult& result) {
  std::ostringstream out;
  out << "variant,n,p,eps,decoder,trials,successes,ratio,ci_lo,ci_hi,seed\n";
  for (const auto& r : result.rows) {
    out << r.variant << ',' << r.n << ',' << fmt_double(r.p) << ',' << fmt_double(r.eps)
        << ',' << r.decoder << ',' << r.trials << ',' << r.successes << ','
        << fmt_double(r.ratio) << ',' << fmt_double(r.ci_lo) << ',' << fmt_double(r.ci_hi)
        << ',' << r.seed << '\n';
  }
  return out.str();
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("emit_csv: cannot open " + path);
  out << csv_string(result);
  if (!out) fail_io("emit_csv: write failed for " + path);
}

SweepResult parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("parse_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    fail_io("parse_csv: empty file " + path);
  if (line != "variant,n,p,eps,decoder,trials,successes,ratio,ci_lo,ci_hi,seed")
    fail_io("parse_csv: unexpected header in " + path);
  SweepResult out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 11)
      fail_io("parse_csv: wrong column count at line " + std::to_string(lineno));
    SweepRow r;
    try {
      r.variant = fields[0];
      r.n = std::stoi(fields[1]);
      r.p = std::strtod(fields[2].c_str(), nullptr);
      r.eps = std::strtod(fields[3].c_str(), nullptr);
      r.decoder = fields[4];
      r.trials = std::stoi(fields[5]);
      r.successes = std::stoi(fields[6]);
      r.ratio = std::strtod(fields[7].c_str(), nullptr);
      r.ci_lo = std::strtod(fields[8].c_str(), nullptr);
      r.ci_hi = std::strtod(fields[9].c_str(), nullptr);
      r.seed = std::stoull(fields[10]);
    } catch (const std::exception&) {
      fail_io("parse_csv: malformed value at line " + std::to_string(lineno));
    }
    if (r.trials < 1 || r.successes < 0 || r.successes > r.trials)
      fail_io("parse_csv: inconsistent counts at line " + std::to_string(lineno));
    out.rows.push_back(std::move(r));
  }
  return out;
}

void emit_svg(const SweepResult& result, const std::string& path,
              const std::vector<double>& reference_ns) {
  const int width = 720, height = 480;
  const int ml = 64, mr = 24, mt = 24, mb = 48;
  double n_min = 1e300, n_max = -1e300;
  for (const auto& r : result.rows) {
    n_min = std::min(n_min, double(r.n));
    n_max = std::max(n_max, double(r.n));
  }
  for (double ref : reference_ns) {
    if (ref > 0) {
      n_min = std::min(n_min, ref);
      n_max = std::max(n_max, ref);
    }
  }
  if (result.rows.empty()) {
    n_min = 0;
    n_max = 1;
  }
  if (n_max <= n_min) n_max = n_min + 1;

  auto sx = [&](double n) {
    return ml + (n - n_min) / (n_max - n_min) * (width - ml - mr);
  };
  auto sy = [&](double ratio) { return height - mb - ratio * (height - mt - mb); };

  // series keyed by (decoder, p, eps)
  std::map<std::string, std::vector<const SweepRow*>> series;
  for (const auto& r : result.rows) {
    std::string key = r.decoder + " p=" + fmt_double(r.p) + " eps=" + fmt_double(r.eps);
    series[key].push_back(&r);
  }
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("emit_svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double ratio = i / 4.0;
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(ratio) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << fmt_double(ratio) << "</text>\n";
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(ratio) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(ratio) << "\" stroke=\"black\"/>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    double n = n_min + (n_max - n_min) * i / 5.0;
    out << "<text x=\"" << sx(n) << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << int64_t(std::lround(n))
        << "</text>\n";
    out << "<line x1=\"" << sx(n) << "\" y1=\"" << height - mb << "\" x2=\"" << sx(n)
        << "\" y2=\"" << height - mb + 4 << "\" stroke=\"black\"/>\n";
  }
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\" font-size=\"13\">n</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">success ratio</text>\n";

  for (double ref : reference_ns) {
    if (!(ref > 0)) continue;
    out << "<line x1=\"" << sx(ref) << "\" y1=\"" << mt << "\" x2=\"" << sx(ref)
        << "\" y2=\"" << height - mb
        << "\" stroke=\"#444444\" stroke-dasharray=\"6,4\" class=\"reference\"/>\n";
  }

  int color_idx = 0;
  int legend_y = mt + 10;
  for (auto& [key, rows] : series) {
    auto sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const SweepRow* a, const SweepRow* b) { return a->n < b->n; });
    const char* color = palette[color_idx % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* r : sorted) out << sx(r->n) << "," << sy(r->ratio) << " ";
    out << "\"/>\n";
    for (const auto* r : sorted)
      out << "<circle cx=\"" << sx(r->n) << "\" cy=\"" << sy(r->ratio)
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << width - mr - 8 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << key
        << "</text>\n";
    legend_y += 16;
    ++color_idx;
  }
  out << "</svg>\n";
  if (!out) fail_io("emit_svg: write failed for " + path);
}

int32_t threshold_crossing_n(double p, double required_ratio, int32_t limit) {
  if (!std::isfinite(required_ratio) || required_ratio <= 0.0 || !(p > 0.0)) return 0;
  for (int32_t n = 3; n <= limit; ++n)
    if (p * n >= required_ratio * std::log(double(n))) return n;
  return 0;
}

FigureResult figure_preset(const std::string& variant, double scale, int32_t jobs,
                           uint64_t seed, std::vector<int32_t> n_grid) {
  double p, eps;
  int32_t base_trials;
  if (variant == "top") {
    p = 0.75;
    eps = 0.35;
    base_trials = 500;
  } else if (variant == "bottom") {
    p = 0.85;
    eps = 0.40;
    base_trials = 100;
  } else {
    fail_invalid("figure_preset: variant must be 'top' or 'bottom'");
  }
  if (!(scale > 0.0) || !(scale <= 1.0)) fail_invalid("figure_preset: scale outside (0,1]");
  int32_t trials = std::max(1, int32_t(std::lround(base_trials * scale)));

  if (n_grid.empty())
    for (int32_t n = 20; n <= 500; n += 20) n_grid.push_back(n);

  FigureResult out;
  for (int32_t n : n_grid) {
    TrialConfig cfg;
    cfg.graph = GraphSpec{GraphSpec::Kind::ErdosRenyi, n, p, 0, ""};
    cfg.eps = eps;
    cfg.decoders = {DecoderKind::Cert};
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.truth = TruthPolicy::Random;
    cfg.variant = variant;
    out.cells.push_back(std::move(cfg));
  }
  out.sweep = run_sweep(out.cells, jobs);

  double s = 1.0 - 2.0 * eps;
  out.it_reference_n = threshold_crossing_n(p, 2.0 / (s * s));
  out.sdp_reference_n = threshold_crossing_n(p, sdp_er_bound(eps, 0.0).required_ratio);
  return out;
}

}  // namespace censync
