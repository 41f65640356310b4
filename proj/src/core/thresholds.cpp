#include "core/thresholds.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace censync {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ThresholdReport::ThresholdReport()
    : n(kNan), p(kNan), d(kNan), eps(kNan), tau(kNan), delta(kNan), lambda2(kNan),
      lambda_n(kNan), h_g(kNan), min_deg(kNan), required_ratio(kNan), required_d(kNan),
      asymptotic_ratio(kNan), expander_ratio(kNan), lhs(kNan), rhs(kNan), verdict(-1),
      vacuous(false) {}

double kl_half(double eps) {
  if (!(eps >= 0.0) || !(eps <= 0.5)) fail_invalid("kl_half: eps outside [0, 1/2]");
  if (eps == 0.0) return kInf;
  double v = -0.5 * std::log(4.0 * eps * (1.0 - eps));
  return v == 0.0 ? 0.0 : v;  // normalize -0.0 so 1/D stays +inf
}

double binary_entropy(double eps) {
  if (!(eps >= 0.0) || !(eps <= 1.0)) fail_invalid("binary_entropy: eps outside [0, 1]");
  if (eps == 0.0 || eps == 1.0) return 0.0;
  return eps * std::log(1.0 / eps) + (1.0 - eps) * std::log(1.0 / (1.0 - eps));
}

ThresholdReport necessary_bound(double n, double tau, double eps) {
  if (!(n >= 3.0)) fail_invalid("necessary_bound: n must be at least 3");
  if (!(tau > 0.0) || !(tau < 2.0 / 3.0))
    fail_invalid("necessary_bound: tau outside (0, 2/3)");
  double D = kl_half(eps);
  double coeff = 1.0 - 1.5 * tau;
  double logn = std::log(n);

  ThresholdReport r;
  r.bound_name = "necessary";
  r.n = n;
  r.tau = tau;
  r.eps = eps;
  r.required_d = coeff / D * logn - 1.0;  // leading term, o(1/D) dropped
  r.required_ratio = r.required_d / logn;
  double s = 1.0 - 2.0 * eps;
  r.asymptotic_ratio = s > 0.0 ? 2.0 * coeff / (s * s) : kInf;
  r.vacuous = !(r.required_d > 0.0);
  r.note = "applies when average degree d <= n^tau";
  return r;
}

ThresholdReport er_sufficient_check(double n, double d, double eps) {
  if (!(n >= 3.0)) fail_invalid("er_sufficient_check: n must be at least 3");
  double logn = std::log(n);
  if (!(d > 2.0 * logn))
    fail_invalid("er_sufficient_check: requires d > 2 log n");
  double D = kl_half(eps);
  double root = std::sqrt(2.0 * logn / d);

  ThresholdReport r;
  r.bound_name = "er-sufficient";
  r.n = n;
  r.d = d;
  r.eps = eps;
  r.required_ratio = std::isinf(D) ? 0.0 : 1.0 / ((1.0 - root) * D);
  double s = 1.0 - 2.0 * eps;
  r.asymptotic_ratio = s > 0.0 ? 2.0 / (s * s) : kInf;
  r.lhs = d / logn;
  r.rhs = r.required_ratio;
  r.verdict = r.lhs >= r.rhs ? 1 : 0;
  return r;
}

ThresholdReport cheeger_sufficient_check(double n, double min_deg, double h_g, double eps) {
  if (!(n >= 2.0)) fail_invalid("cheeger_sufficient_check: n must be at least 2");
  if (!(h_g > 0.0)) fail_invalid("cheeger_sufficient_check: h_G must be positive");
  double D = kl_half(eps);
  double logn = std::log(n);

  ThresholdReport r;
  r.bound_name = "cheeger-sufficient";
  r.n = n;
  r.min_deg = min_deg;
  r.h_g = h_g;
  r.eps = eps;
  r.required_ratio = std::isinf(D) ? 0.0 : 1.0 / (h_g * D);
  double s = 1.0 - 2.0 * eps;
  r.asymptotic_ratio = s > 0.0 ? 2.0 / (h_g * s * s) : kInf;
  r.lhs = min_deg / logn;
  r.rhs = r.required_ratio;
  r.verdict = r.lhs > r.rhs ? 1 : 0;  // strict inequality
  r.note = "for d-regular graphs, min_deg = d";
  return r;
}

ThresholdReport sdp_er_bound(double eps, double delta) {
  if (!(eps >= 0.0) || eps >= 0.5) fail_invalid("sdp_er_bound: eps outside [0, 1/2)");
  if (!(delta >= 0.0)) fail_invalid("sdp_er_bound: delta must be nonnegative");
  double s = 1.0 - 2.0 * eps;

  ThresholdReport r;
  r.bound_name = "sdp-er";
  r.eps = eps;
  r.delta = delta;
  r.required_ratio = (1.0 + delta) * (4.0 / (s * s) + 4.0 / (3.0 * s));
  r.asymptotic_ratio = 4.0 * (1.0 + delta) / (s * s);
  r.note = "success probability at least 1 - n^(-delta)";
  return r;
}

ThresholdReport sdp_regular_bound(double eps, double delta, double lambda2,
                                  double lambda_n) {
  if (!(lambda2 < 1.0)) fail_invalid("sdp_regular_bound: requires lambda2 < 1");
  if (!(eps >= 0.0) || !(eps <= 0.5)) fail_invalid("sdp_regular_bound: eps outside [0, 1/2]");
  if (!(delta >= 0.0)) fail_invalid("sdp_regular_bound: delta must be nonnegative");
  double s = 1.0 - 2.0 * eps;
  double gap = 1.0 - lambda2;
  double an = 1.0 + std::abs(lambda_n);

  ThresholdReport r;
  r.bound_name = "sdp-regular";
  r.eps = eps;
  r.delta = delta;
  r.lambda2 = lambda2;
  r.lambda_n = lambda_n;
  double factor = 4.0 * (1.0 + delta) * an / (gap * gap);
  double bracket = (s > 0.0 ? 1.0 / (s * s) : kInf) +
                   (s > 0.0 ? gap / (3.0 * s * an) : kInf) + gap / (3.0 * an) - 1.0;
  r.required_ratio = factor * bracket;
  r.asymptotic_ratio = s > 0.0 ? factor / (s * s) : kInf;
  r.expander_ratio = s > 0.0 ? 4.0 * (1.0 + delta) / (s * s) : kInf;
  r.note = "success probability at least 1 - n^(-delta)";
  return r;
}

ThresholdReport path_vote_check(double n, double p, double eps, double delta) {
  if (!(n >= 3.0)) fail_invalid("path_vote_check: n must be at least 3");
  if (!(p >= 0.0) || !(p <= 1.0)) fail_invalid("path_vote_check: p outside [0,1]");
  if (!(eps >= 0.0) || !(eps <= 0.5)) fail_invalid("path_vote_check: eps outside [0, 1/2]");
  if (!(delta >= 0.0)) fail_invalid("path_vote_check: delta must be nonnegative");
  double s = 1.0 - 2.0 * eps;
  double s2 = s * s;
  double logn = std::log(n);

  ThresholdReport r;
  r.bound_name = "path-vote";
  r.n = n;
  r.p = p;
  r.eps = eps;
  r.delta = delta;
  r.lhs = (n - 2.0) * p * p * s2 * s2 / 2.0;
  r.rhs = (1.0 + delta) * logn * (1.0 + (1.0 + p * p * s2) * s2 / 3.0);
  r.verdict = r.lhs >= r.rhs ? 1 : 0;
  r.asymptotic_ratio =
      s > 0.0 ? std::sqrt(2.0 * (1.0 + delta)) / s2 * std::sqrt(n / logn) : kInf;
  return r;
}

std::pair<double, double> cheeger_inequality_bounds(double lambda2) {
  if (lambda2 > 1.0) fail_invalid("cheeger_inequality_bounds: lambda2 exceeds 1");
  double gap = 1.0 - lambda2;
  return {gap / 2.0, std::sqrt(2.0 * gap)};
}

}  // namespace censync
