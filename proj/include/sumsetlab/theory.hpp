#pragma once

#include <cstdint>
#include <string>

#include "sumsetlab/core.hpp"

namespace sumsetlab {

// How the expected number of under-covered targets is evaluated:
//   exact      — true probability model of the disjoint pair structure
//   paper      — floor(j/2) independent-pair approximation, symmetrized double sum
//   asymptotic — closed form 4/(p^2 (g-1)!) (alpha n p^2/2)^{g-1} exp(-alpha n p^2/2)
enum class LambdaMode { exact, paper, asymptotic };

LambdaMode lambda_mode_from_string(const std::string& name);
std::string to_string(LambdaMode mode);

// Threshold inclusion probability for the truncated-basis property.
// h == 2 route (any g >= 1):
//   p = sqrt(((2/a) ln n + (g-2)(2/a) ln ln n + A) / n)
// g == 1 route (any h >= 2), with K = h!(h-1)!/a^{h-1}:
//   p = ((K ln n - K ln ln n + A) / n^{h-1})^{1/h}
// Natural logs. Throws std::domain_error if the radicand is nonpositive or the
// result is not a probability below 1.
double threshold_p(const ThresholdSpec& spec);
double threshold_p_h2(std::int64_t n, double alpha, int g, double A);
double threshold_p_g1(std::int64_t n, double alpha, int h, double A);

// Limiting probability that the random set is a truncated basis when the
// additive constant A_n converges to A:
//   h == 2:  exp(-(2a/(g-1)!) e^{-A a/2})
//   g == 1:  exp(-(2a/(h-1)) e^{-A/K})
double limit_probability(const ThresholdSpec& spec);
double limit_probability_h2(double alpha, int g, double A);
double limit_probability_g1(double alpha, int h, double A);

// Probability that target j (0 <= j <= 2n) has fewer than g two-element
// multiset representations from a p-random subset of {0,...,n}.
//
// exact mode: the pairs {a, j-a} with max(0, j-n) <= a < j/2 are disjoint and
// succeed independently with probability p^2; when j is even and j/2 <= n the
// singleton {j/2} adds one independent success of probability p.
// paper mode: Binom(floor(j/2), p^2) tail, P(successes <= g-1).
double indicator_prob(std::int64_t j, std::int64_t n, double p, int g, LambdaMode mode);

// Expected number of under-covered targets in [ceil(a n), floor((2-a) n)].
// exact sums indicator_prob over the whole window; paper evaluates the
// symmetrized form 2 * sum_{j=ceil(a n)}^{n}; asymptotic requires n p^2 > 1.
// All modes evaluate in log space where the terms would overflow.
double lambda_value(std::int64_t n, double alpha, double p, int g, LambdaMode mode);

// Poisson-approximation error bound with its leading component exposed.
// total = L_t1 (a n p^2/2)^{g-1} e^{-a n p^2/2} + K_corr lambda_exact/(n p).
// t1 is the exactly computable head term P(the leftmost window target is
// under-covered) = indicator_prob(ceil(a n), n, p, g, exact).
struct SteinChenBound {
    double clump_term = 0.0;
    double correlation_term = 0.0;
    double total = 0.0;
    double t1 = 0.0;
};

SteinChenBound stein_chen_bound(std::int64_t n, double alpha, double p, int g,
                                double K_corr = 1.0, double L_t1 = 1.0);

// Occupancy thresholds for n balls dropped uniformly into N boxes:
//   packing_threshold  = N^{g/(g+1)}   (first box with g+1 balls appears)
//   coverage_threshold = N(ln N + (g-1) ln ln N)
//   mean_vg            = N(ln N + (g-1) ln ln N + gamma - ln (g-1)!)
// mean_vg is the leading expansion of E[throws until every box holds g balls].
struct BallsBoxesFormulas {
    double packing_threshold = 0.0;
    double coverage_threshold = 0.0;
    double mean_vg = 0.0;
};

BallsBoxesFormulas balls_boxes_formulas(std::int64_t N, int g);

// Critical size n^{g/(h(g+1))} separating almost-sure B_h[g] membership from
// almost-sure failure for k-element random subsets of [n].
double bhg_threshold_size(std::int64_t n, int h, int g);

// Standard Gumbel distribution function exp(-e^{-u}).
double gumbel_cdf(double u);

}  // namespace sumsetlab
