#include "tfm/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace tfm {

namespace {

void check_params(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
}

void check_shade_params(int n, int k, bool allow_unverified) {
    if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
    if (k > kMaxVerifiedBlock && !allow_unverified)
        throw std::domain_error("equilibrium formula unverified for k > 10");
}

}  // namespace

Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

Rat poly_P(int n, int k, const Rat& v) {
    check_params(n, k);
    Rat sum = 0;
    Rat power = 1;  // (-v)^(k-1-i), built from the i = k-1 end down
    for (int i = k - 1; i >= 0; --i) {
        sum += Rat(binomial(n, n - i) * binomial(n - i - 1, n - k)) * power;
        power *= -v;
    }
    return sum;
}

double poly_P(int n, int k, double v) {
    check_params(n, k);
    // Kahan summation; terms alternate in sign.
    double sum = 0.0, comp = 0.0;
    double power = 1.0;
    for (int i = k - 1; i >= 0; --i) {
        const double coeff =
            Rat(binomial(n, n - i) * binomial(n - i - 1, n - k)).get_d();
        const double term = coeff * power;
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        power *= -v;
    }
    return sum;
}

Rat shade_bid_uniform(int n, int k, const Rat& v, bool allow_unverified) {
    check_shade_params(n, k, allow_unverified);
    if (v == 0) return 0;
    return rat(n - k) * v / rat(n) * poly_P(n, k, v) / poly_P(n - 1, k, v);
}

double shade_bid_uniform(int n, int k, double v, bool allow_unverified) {
    check_shade_params(n, k, allow_unverified);
    if (v == 0.0) return 0.0;
    return (static_cast<double>(n - k) * v / n) * poly_P(n, k, v) / poly_P(n - 1, k, v);
}

double win_probability(int n, int k, double v) {
    check_params(n, k);
    if (k >= n) return 1.0;
    double sum = 0.0;
    for (int i = 0; i < k; ++i)
        sum += binomial(n - 1, i).get_d() * std::pow(1.0 - v, i) *
               std::pow(v, n - 1 - i);
    return sum;
}

double inverse_shade_uniform(int n, int k, double bid, bool allow_unverified) {
    check_shade_params(n, k, allow_unverified);
    if (bid <= 0.0) return 0.0;
    if (bid >= shade_bid_uniform(n, k, 1.0, allow_unverified)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (shade_bid_uniform(n, k, mid, allow_unverified) < bid)
            lo = mid;
        else
            hi = mid;
    }
    if (hi - lo > 1e-12)
        throw std::runtime_error("bisection failed to converge; s is not monotone?");
    return 0.5 * (lo + hi);
}

double best_response_gap(int n, int k, double v, double grid_step) {
    if (grid_step <= 0.0) throw std::invalid_argument("grid_step must be positive");
    if (v == 0.0) return 0.0;
    const double eq_utility =
        win_probability(n, k, v) * (v - shade_bid_uniform(n, k, v));
    double best = 0.0;
    for (double b = 0.0; b <= v + 1e-15; b += grid_step) {
        const double t = inverse_shade_uniform(n, k, b);
        const double u = win_probability(n, k, t) * (v - b);
        if (u > best) best = u;
    }
    return best - eq_utility;
}

Rat uniform_order_stat_mean(int n, int i) {
    if (i < 1 || i > n) throw std::out_of_range("order statistic index out of range");
    return rat(n + 1 - i, n + 1);
}

Rat harmonic(int n) {
    if (n < 0) throw std::invalid_argument("harmonic needs n >= 0");
    Rat h = 0;
    for (int i = 1; i <= n; ++i) h += rat(1, i);
    return h;
}

Rat exponential_order_stat_mean(int n, int i, const Rat& zeta) {
    if (i < 1 || i > n) throw std::out_of_range("order statistic index out of range");
    if (zeta <= 0) throw std::invalid_argument("zeta must be positive");
    return (harmonic(n) - harmonic(i - 1)) / zeta;
}

}  // namespace tfm
