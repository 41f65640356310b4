// Command-line front-end for the censync shared library.
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "censync.h"

namespace {

using json = nlohmann::json;

struct GraphDeleter {
  void operator()(censync_graph* g) const { censync_graph_free(g); }
};
struct MeasDeleter {
  void operator()(censync_measurements* m) const { censync_meas_free(m); }
};
struct AssignDeleter {
  void operator()(censync_assignment* a) const { censync_assignment_free(a); }
};
struct ResultDeleter {
  void operator()(censync_result* r) const { censync_result_free(r); }
};
struct SweepDeleter {
  void operator()(censync_sweep* s) const { censync_sweep_free(s); }
};

using GraphPtr = std::unique_ptr<censync_graph, GraphDeleter>;
using MeasPtr = std::unique_ptr<censync_measurements, MeasDeleter>;
using AssignPtr = std::unique_ptr<censync_assignment, AssignDeleter>;
using ResultPtr = std::unique_ptr<censync_result, ResultDeleter>;
using SweepPtr = std::unique_ptr<censync_sweep, SweepDeleter>;

[[noreturn]] void die(censync_status st) {
  std::cerr << "censync: " << censync_last_error() << "\n";
  std::exit(static_cast<int>(st));
}

void check(censync_status st) {
  if (st != CENSYNC_OK) die(st);
}

std::string grab_string(censync_status st, char* s) {
  check(st);
  std::string out = s ? s : "";
  censync_string_free(s);
  return out;
}

// shortest decimal that parses back to the same double
std::string fmt(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x || (std::isnan(x) && std::isnan(std::strtod(buf, nullptr))))
      return buf;
  }
  return buf;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "censync: cannot open " << path << "\n";
    std::exit(2);
  }
  out << text;
}

GraphPtr load_graph_arg(const std::string& path) {
  censync_graph* g = nullptr;
  check(censync_graph_load(path.c_str(), &g));
  return GraphPtr(g);
}

MeasPtr load_meas_arg(const censync_graph* g, const std::string& path) {
  censync_measurements* m = nullptr;
  check(censync_meas_load(g, path.c_str(), &m));
  return MeasPtr(m);
}

json result_to_json(const censync_result* r) {
  char* s = nullptr;
  std::string text = grab_string(censync_result_json(r, &s), s);
  return json::parse(text);
}

std::string render_result_text(const json& j) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& val) {
    out += key;
    out.append(key.size() < 22 ? 22 - key.size() : 1, ' ');
    out += val + "\n";
  };
  line("algorithm", j["algorithm"].get<std::string>());
  line("estimate", j["estimate"].get<std::string>());
  line("objective", fmt(j["objective"].get<double>()));
  line("tie", j["tie"].get<bool>() ? "true" : "false");
  for (const char* key :
       {"num_optimal_classes", "certified", "lambda2", "converged", "rank_one"}) {
    if (j.contains(key)) line(key, j[key].dump());
  }
  if (j.contains("undecided")) line("undecided", j["undecided"].dump());
  return out;
}

json report_to_json(const censync_threshold_report& r) {
  json j;
  j["bound"] = r.bound_name;
  auto put = [&](const char* key, double v) {
    if (!std::isnan(v)) j[key] = v;
  };
  put("n", r.n);
  put("p", r.p);
  put("d", r.d);
  put("eps", r.eps);
  put("tau", r.tau);
  put("delta", r.delta);
  put("lambda2", r.lambda2);
  put("lambda_n", r.lambda_n);
  put("h_g", r.h_g);
  put("min_deg", r.min_deg);
  put("required_ratio", r.required_ratio);
  put("required_d", r.required_d);
  put("asymptotic_ratio", r.asymptotic_ratio);
  put("expander_ratio", r.expander_ratio);
  put("lhs", r.lhs);
  put("rhs", r.rhs);
  if (r.verdict >= 0) j["satisfied"] = r.verdict == 1;
  j["vacuous"] = r.vacuous != 0;
  if (r.note[0]) j["note"] = r.note;
  return j;
}

std::string render_report_text(const json& j) {
  std::string out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = it.key();
    std::string val;
    if (it->is_number()) {
      val = fmt(it->get<double>());
    } else if (it->is_boolean()) {
      val = it->get<bool>() ? "true" : "false";
    } else {
      val = it->get<std::string>();
    }
    out += key;
    out.append(key.size() < 22 ? 22 - key.size() : 1, ' ');
    out += val + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"censored edge-measurement simulation, decoding and phase-transition sweeps"};
  app.require_subcommand(1);

  std::string output, format = "text", graph_path, meas_path;
  uint64_t seed = 0;

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a graph and write it as an edge list");
  gen->require_subcommand(1);
  int32_t gen_n = 0;
  double gen_p = 0.0;
  int32_t gen_d = 0;
  std::string gen_out;
  uint64_t gen_seed = 0;
  auto* gen_er = gen->add_subcommand("er", "Erdos-Renyi ER(n, p)");
  gen_er->add_option("--n", gen_n, "vertex count")->required();
  gen_er->add_option("--p", gen_p, "edge probability")->required();
  gen_er->add_option("--seed", gen_seed, "random seed (default 0)");
  gen_er->add_option("-o,--output", gen_out, "output path")->required();
  auto* gen_reg = gen->add_subcommand("regular", "random d-regular (pairing model)");
  gen_reg->add_option("--n", gen_n, "vertex count")->required();
  gen_reg->add_option("--d", gen_d, "degree")->required();
  gen_reg->add_option("--seed", gen_seed, "random seed (default 0)");
  gen_reg->add_option("-o,--output", gen_out, "output path")->required();

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "synthesize censored measurements on a graph");
  double synth_eps = 0.0;
  std::string synth_truth = "random", truth_out;
  synth->add_option("--graph", graph_path, "graph file")->required();
  synth->add_option("--eps", synth_eps, "noise level in [0, 1/2]")->required();
  synth->add_option("--seed", seed, "random seed (default 0)");
  synth->add_option("--truth", synth_truth, "random | zero | explicit bit string");
  synth->add_option("--truth-out", truth_out, "write the ground truth bits here");
  synth->add_option("-o,--output", output, "measurement file")->required();

  // ---- decode ----
  auto* decode = app.add_subcommand("decode", "run a decoder on measurements");
  std::string alg;
  int32_t cap = 0, center = -1, rank = 0;
  int64_t max_iters = 0;
  double tol = 0.0;
  bool certify = false;
  decode->add_option("--alg", alg, "ml | sdp | spectral | vote")->required();
  decode->add_option("--graph", graph_path, "graph file")->required();
  decode->add_option("--meas", meas_path, "measurement file")->required();
  decode->add_option("--cap", cap, "ML enumeration cap (default 24)");
  decode->add_option("--center", center, "voting center (default: max degree)");
  decode->add_option("--rank", rank, "SDP factorization rank (default: auto)");
  decode->add_option("--max-iters", max_iters, "SDP iteration cap");
  decode->add_option("--tol", tol, "SDP gradient tolerance");
  decode->add_option("--seed", seed, "SDP start seed (default 0)");
  decode->add_flag("--certify", certify, "also check the dual certificate at the estimate");
  decode->add_option("--format", format, "text | json (default json for decode)");
  decode->add_option("-o,--output", output, "write output here instead of stdout");

  // ---- cert ----
  auto* cert = app.add_subcommand("cert", "check the dual certificate for a candidate");
  std::string cand_bits;
  cert->add_option("--graph", graph_path, "graph file")->required();
  cert->add_option("--meas", meas_path, "measurement file")->required();
  cert->add_option("--assignment", cand_bits, "candidate bit string")->required();
  cert->add_option("--format", format, "text | json");
  cert->add_option("-o,--output", output, "output path");

  // ---- cheeger ----
  auto* cheeger = app.add_subcommand("cheeger", "exact Cheeger constant (brute force)");
  int32_t cheeger_cap = 0;
  cheeger->add_option("--graph", graph_path, "graph file")->required();
  cheeger->add_option("--cap", cheeger_cap, "enumeration cap (default 22)");
  cheeger->add_option("--format", format, "text | json");
  cheeger->add_option("-o,--output", output, "output path");

  // ---- spectrum ----
  auto* spectrum = app.add_subcommand("spectrum", "lambda2 and lambda_n of (1/d) A");
  spectrum->add_option("--graph", graph_path, "graph file (must be regular)")->required();
  spectrum->add_option("--format", format, "text | json");
  spectrum->add_option("-o,--output", output, "output path");

  // ---- threshold ----
  auto* threshold = app.add_subcommand("threshold", "evaluate a recovery bound");
  std::string bound;
  double th_n = 0, th_p = 0, th_d = 0, th_eps = 0, th_tau = 0, th_delta = 0;
  double th_l2 = 0, th_ln = 0, th_h = 0, th_mindeg = 0;
  threshold->add_option("--bound", bound,
                        "necessary | er | cheeger | sdp-er | sdp-regular | vote")
      ->required();
  threshold->add_option("--n", th_n, "number of vertices");
  threshold->add_option("--p", th_p, "edge probability");
  threshold->add_option("--d", th_d, "(expected) average degree");
  threshold->add_option("--eps", th_eps, "noise level");
  threshold->add_option("--tau", th_tau, "degree-growth exponent (necessary bound)");
  threshold->add_option("--delta", th_delta, "confidence exponent");
  threshold->add_option("--lambda2", th_l2, "second largest eigenvalue of (1/d) A");
  threshold->add_option("--lambdan", th_ln, "smallest eigenvalue of (1/d) A");
  threshold->add_option("--h", th_h, "Cheeger constant");
  threshold->add_option("--min-deg", th_mindeg, "minimum degree");
  threshold->add_option("--format", format, "text | json");
  threshold->add_option("-o,--output", output, "output path");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo success-ratio sweep");
  std::vector<int32_t> sw_n;
  std::vector<double> sw_p, sw_eps;
  std::string sw_decoders = "cert", sw_svg, sw_variant = "sweep";
  int32_t sw_trials = 100, sw_jobs = 1, sw_d = 0, sw_mlcap = 0;
  bool sw_truth_zero = false;
  sweep->add_option("--n", sw_n, "vertex counts")->required()->delimiter(',');
  sweep->add_option("--p", sw_p, "edge probabilities (ER)")->delimiter(',');
  sweep->add_option("--d", sw_d, "degree (d-regular sweep instead of ER)");
  sweep->add_option("--eps", sw_eps, "noise levels")->required()->delimiter(',');
  sweep->add_option("--decoders", sw_decoders, "comma list of ml,sdp,spectral,vote,cert");
  sweep->add_option("--trials", sw_trials, "trials per cell (default 100)");
  sweep->add_option("--seed", seed, "master seed (default 0)");
  sweep->add_option("--jobs", sw_jobs, "worker threads (default 1)");
  sweep->add_option("--ml-cap", sw_mlcap, "ML enumeration cap");
  sweep->add_flag("--truth-zero", sw_truth_zero, "use the all-zero ground truth");
  sweep->add_option("--variant", sw_variant, "label for the CSV variant column");
  sweep->add_option("-o,--output", output, "CSV path (default stdout)");
  sweep->add_option("--svg", sw_svg, "also write an SVG plot here");

  // ---- figure ----
  auto* figure = app.add_subcommand("figure", "phase-transition preset (certificate ratio)");
  std::string fig_variant = "top", fig_svg;
  double fig_scale = 1.0;
  int32_t fig_jobs = 1;
  std::vector<int32_t> fig_n;
  figure->add_option("--variant", fig_variant, "top (p=0.75, eps=0.35) | bottom (p=0.85, eps=0.4)");
  figure->add_option("--scale", fig_scale, "trial-count scale factor in (0,1]");
  figure->add_option("--jobs", fig_jobs, "worker threads (default 1)");
  figure->add_option("--seed", seed, "master seed (default 0)");
  figure->add_option("--n", fig_n, "n grid override")->delimiter(',');
  figure->add_option("-o,--output", output, "CSV path (default figure_<variant>.csv)");
  figure->add_option("--svg", fig_svg, "SVG path (default figure_<variant>.svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::exit(app.exit(e));
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::exit(1);
  }

  if (gen->parsed()) {
    censync_graph* g = nullptr;
    if (gen_er->parsed())
      check(censync_graph_gen_er(gen_n, gen_p, gen_seed, 0, &g));
    else
      check(censync_graph_gen_regular(gen_n, gen_d, gen_seed, 0, &g));
    GraphPtr gp(g);
    check(censync_graph_save(g, gen_out.c_str()));
    return 0;
  }

  if (synth->parsed()) {
    GraphPtr g = load_graph_arg(graph_path);
    int32_t n = censync_graph_n(g.get());
    censync_assignment* truth = nullptr;
    if (synth_truth == "random")
      check(censync_assignment_random(n, seed, 1, &truth));
    else if (synth_truth == "zero")
      check(censync_assignment_zeros(n, &truth));
    else
      check(censync_assignment_from_string(synth_truth.c_str(), &truth));
    AssignPtr tp(truth);
    censync_measurements* m = nullptr;
    check(censync_synthesize(g.get(), truth, synth_eps, seed, 2, &m));
    MeasPtr mp(m);
    check(censync_meas_save(m, output.c_str()));
    if (!truth_out.empty()) {
      char* s = nullptr;
      std::string bits = grab_string(censync_assignment_to_string(truth, &s), s);
      write_output(bits + "\n", truth_out);
    }
    return 0;
  }

  if (decode->parsed()) {
    GraphPtr g = load_graph_arg(graph_path);
    MeasPtr m = load_meas_arg(g.get(), meas_path);
    censync_result* r = nullptr;
    if (alg == "ml") {
      check(censync_decode_ml(m.get(), cap, &r));
    } else if (alg == "sdp") {
      censync_sdp_options opts;
      censync_sdp_options_default(&opts);
      if (rank > 0) opts.rank = rank;
      if (max_iters > 0) opts.max_iterations = max_iters;
      if (tol > 0) opts.grad_tol = tol;
      opts.seed = seed;
      check(censync_decode_sdp(m.get(), &opts, &r));
    } else if (alg == "spectral") {
      check(censync_decode_spectral(m.get(), &r));
    } else if (alg == "vote") {
      check(censync_decode_vote(m.get(), center, &r));
    } else {
      std::cerr << "censync: unknown decoder '" << alg << "'\n";
      return 1;
    }
    ResultPtr rp(r);
    if (certify) check(censync_result_attach_certificate(r, m.get()));
    json j = result_to_json(r);
    bool want_text = decode->count("--format") && format == "text";
    write_output(want_text ? render_result_text(j) : j.dump() + "\n", output);
    return 0;
  }

  if (cert->parsed()) {
    GraphPtr g = load_graph_arg(graph_path);
    MeasPtr m = load_meas_arg(g.get(), meas_path);
    censync_assignment* a = nullptr;
    check(censync_assignment_from_string(cand_bits.c_str(), &a));
    AssignPtr ap(a);
    double lambda2 = 0;
    int certified = 0;
    check(censync_certificate_check(m.get(), a, &lambda2, &certified));
    json j{{"lambda2", lambda2}, {"certified", certified != 0}};
    write_output(format == "json" ? j.dump() + "\n" : render_report_text(j), output);
    return 0;
  }

  if (cheeger->parsed()) {
    GraphPtr g = load_graph_arg(graph_path);
    double h = 0;
    check(censync_graph_cheeger(g.get(), cheeger_cap, &h));
    json j{{"cheeger", h}};
    write_output(format == "json" ? j.dump() + "\n" : render_report_text(j), output);
    return 0;
  }

  if (spectrum->parsed()) {
    GraphPtr g = load_graph_arg(graph_path);
    double l2 = 0, ln = 0;
    check(censync_graph_spectral_lambdas(g.get(), &l2, &ln));
    double lo = 0, hi = 0;
    check(censync_cheeger_inequality(l2, &lo, &hi));
    json j{{"lambda2", l2},
           {"lambda_n", ln},
           {"cheeger_lower", lo},
           {"cheeger_upper", hi}};
    write_output(format == "json" ? j.dump() + "\n" : render_report_text(j), output);
    return 0;
  }

  if (threshold->parsed()) {
    censync_threshold_report rep{};
    if (bound == "necessary") {
      check(censync_threshold_necessary(th_n, th_tau, th_eps, &rep));
    } else if (bound == "er") {
      check(censync_threshold_er(th_n, th_d, th_eps, &rep));
    } else if (bound == "cheeger") {
      check(censync_threshold_cheeger(th_n, th_mindeg, th_h, th_eps, &rep));
    } else if (bound == "sdp-er") {
      check(censync_threshold_sdp_er(th_eps, th_delta, &rep));
    } else if (bound == "sdp-regular") {
      check(censync_threshold_sdp_regular(th_eps, th_delta, th_l2, th_ln, &rep));
    } else if (bound == "vote") {
      check(censync_threshold_path_vote(th_n, th_p, th_eps, th_delta, &rep));
    } else {
      std::cerr << "censync: unknown bound '" << bound << "'\n";
      return 1;
    }
    json j = report_to_json(rep);
    write_output(format == "json" ? j.dump() + "\n" : render_report_text(j), output);
    return 0;
  }

  if (sweep->parsed()) {
    uint32_t mask = 0;
    std::stringstream ss(sw_decoders);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "ml")
        mask |= CENSYNC_DECODER_ML;
      else if (tok == "sdp")
        mask |= CENSYNC_DECODER_SDP;
      else if (tok == "spectral")
        mask |= CENSYNC_DECODER_SPECTRAL;
      else if (tok == "vote")
        mask |= CENSYNC_DECODER_VOTE;
      else if (tok == "cert")
        mask |= CENSYNC_DECODER_CERT;
      else {
        std::cerr << "censync: unknown decoder '" << tok << "'\n";
        return 1;
      }
    }
    if (sw_d <= 0 && sw_p.empty()) {
      std::cerr << "censync: sweep needs --p (ER) or --d (regular)\n";
      return 1;
    }
    censync_sweep_spec spec{};
    spec.n_values = sw_n.data();
    spec.n_count = sw_n.size();
    spec.p_values = sw_p.data();
    spec.p_count = sw_p.size();
    spec.regular_d = sw_d;
    spec.eps_values = sw_eps.data();
    spec.eps_count = sw_eps.size();
    spec.decoders = mask;
    spec.trials = sw_trials;
    spec.seed = seed;
    spec.jobs = sw_jobs;
    spec.ml_cap = sw_mlcap;
    spec.truth_zero = sw_truth_zero ? 1 : 0;
    spec.variant = sw_variant.c_str();
    censync_sweep* s = nullptr;
    check(censync_sweep_run(&spec, &s));
    SweepPtr sp(s);
    if (output.empty()) {
      char* csv = nullptr;
      std::cout << grab_string(censync_sweep_csv_string(s, &csv), csv);
    } else {
      check(censync_sweep_save_csv(s, output.c_str()));
    }
    if (!sw_svg.empty()) check(censync_sweep_save_svg(s, sw_svg.c_str(), 0));
    return 0;
  }

  if (figure->parsed()) {
    censync_sweep* s = nullptr;
    check(censync_figure_preset(fig_variant.c_str(), fig_scale, fig_jobs, seed,
                                fig_n.empty() ? nullptr : fig_n.data(), fig_n.size(), &s));
    SweepPtr sp(s);
    std::string csv_path = output.empty() ? "figure_" + fig_variant + ".csv" : output;
    std::string svg_path = fig_svg.empty() ? "figure_" + fig_variant + ".svg" : fig_svg;
    check(censync_sweep_save_csv(s, csv_path.c_str()));
    check(censync_sweep_save_svg(s, svg_path.c_str(), 1));
    std::cerr << "wrote " << csv_path << " and " << svg_path
              << " (references: IT n=" << censync_sweep_it_reference(s)
              << ", SDP n=" << censync_sweep_sdp_reference(s) << ")\n";
    return 0;
  }

  return 1;
}
