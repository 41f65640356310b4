#pragma once

#include <string>
#include <utility>

namespace censync {

/// D(1/2 || eps) in nats; +infinity at eps = 0.
double kl_half(double eps);

/// Binary entropy in nats; 0 at both endpoints.
double binary_entropy(double eps);

/// Evaluation of one recovery bound. Inputs are echoed (NaN when a field does
/// not apply). `required_ratio` is the exact displayed expression for the
/// needed d/log n (or min-degree/log n); `asymptotic_ratio` is the leading
/// form valid only as eps -> 1/2, with o(.) remainders dropped.
struct ThresholdReport {
  std::string bound_name;

  double n, p, d, eps, tau, delta, lambda2, lambda_n, h_g, min_deg;

  double required_ratio;
  double required_d;        // absolute degree threshold when the theorem gives one
  double asymptotic_ratio;  // valid only as eps -> 1/2
  double expander_ratio;    // regular SDP bound at lambda2 = lambda_n = 0
  double lhs, rhs;          // sides of a predicate bound

  int verdict;    // 1 satisfied, 0 not, -1 not a predicate
  bool vacuous;   // bound degenerated to a non-constraint
  std::string note;

  ThresholdReport();
};

/// Necessary condition: smallest average degree compatible with recovery,
/// leading term only. Applies when d <= n^tau with 0 < tau < 2/3.
ThresholdReport necessary_bound(double n, double tau, double eps);

/// Sufficient condition for ER(n, p) with expected average degree d;
/// requires d > 2 log n.
ThresholdReport er_sufficient_check(double n, double d, double eps);

/// Sufficient condition for any graph in terms of its Cheeger constant.
ThresholdReport cheeger_sufficient_check(double n, double min_deg, double h_g, double eps);

/// Degree rate required for the SDP on ER graphs; success probability
/// at least 1 - n^(-delta).
ThresholdReport sdp_er_bound(double eps, double delta);

/// Degree rate required for the SDP on d-regular graphs with normalized
/// adjacency eigenvalues lambda2 (second largest) and lambda_n (smallest).
ThresholdReport sdp_regular_bound(double eps, double delta, double lambda2, double lambda_n);

/// Condition for 2-path majority voting on ER(n, p).
ThresholdReport path_vote_check(double n, double p, double eps, double delta);

/// ((1 - lambda2)/2, sqrt(2 (1 - lambda2))), the two-sided estimate of h_G.
std::pair<double, double> cheeger_inequality_bounds(double lambda2);

}  // namespace censync
