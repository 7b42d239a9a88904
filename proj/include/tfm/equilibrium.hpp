#pragma once

#include "tfm/rational.hpp"

namespace tfm {

// Verified range of the closed-form PABGA equilibrium under UNI(0,1).
inline constexpr int kMaxVerifiedBlock = 10;

Int binomial(int n, int k);

// P_{n,k}(v) = sum_{i=0}^{k-1} C(n, n-i) * C(n-i-1, n-k) * (-v)^(k-1-i).
// Alternating signs make the float path cancellation-prone for large n, so
// rational arguments get an exact evaluation.
Rat poly_P(int n, int k, const Rat& v);
double poly_P(int n, int k, double v);  // compensated summation

// Equilibrium bid s(v) = ((n-k) v / n) * P_{n,k}(v) / P_{n-1,k}(v).
// k > kMaxVerifiedBlock is rejected unless allow_unverified is set.
Rat shade_bid_uniform(int n, int k, const Rat& v, bool allow_unverified = false);
double shade_bid_uniform(int n, int k, double v, bool allow_unverified = false);

// P(at most k-1 of n-1 iid UNI(0,1) opponents exceed v)
double win_probability(int n, int k, double v);

// Inverse of s on [0,1] by monotone bisection to absolute tolerance 1e-12.
// Bids above s(1) map to 1.
double inverse_shade_uniform(int n, int k, double bid, bool allow_unverified = false);

// Max over the bid grid {0, step, ..., <= v} of the deviation utility minus
// the equilibrium utility; a correct equilibrium keeps this O(step).
double best_response_gap(int n, int k, double v, double grid_step);

// Mean of the i-th highest of n iid UNI(0,1): (n+1-i)/(n+1).
Rat uniform_order_stat_mean(int n, int i);

// H_n = sum_{i=1}^{n} 1/i, exact; harmonic(0) = 0.
Rat harmonic(int n);

// Mean of the i-th highest of n iid EXP(zeta): (H_n - H_{i-1}) / zeta.
Rat exponential_order_stat_mean(int n, int i, const Rat& zeta);

}  // namespace tfm
