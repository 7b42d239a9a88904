#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfm/equilibrium.hpp"

using namespace tfm;

TEST_CASE("binomial coefficients") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(52, 5) == Int("2598960"));
}

TEST_CASE("P_{n,k} exact evaluations") {
    // P_{n,1}(v) = C(n, n) = 1 for every v
    CHECK(poly_P(5, 1, rat(1, 3)) == 1);
    // P_{4,2}(v) = C(4,3)C(2,2) - C(4,4)C(3,2)v = 4 - 3v
    CHECK(poly_P(4, 2, rat(1, 2)) == rat(5, 2));
    CHECK(poly_P(4, 2, rat(1)) == 1);
    // P_{n,k}(1) = 1 (probability normalization)
    for (int n = 2; n <= 12; ++n)
        for (int k = 1; k <= n; ++k) CHECK(poly_P(n, k, rat(1)) == 1);
}

TEST_CASE("double path agrees with the exact path, including large n") {
    for (int n : {4, 10, 30, 64}) {
        for (int k = 1; k <= std::min(n, 10); ++k) {
            for (int j = 1; j <= 4; ++j) {
                const Rat v = rat(j, 4);
                CHECK(poly_P(n, k, to_double(v)) ==
                      doctest::Approx(to_double(poly_P(n, k, v))).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("classic single-item first-price shade: s(v) = v/2 for n=2, k=1") {
    CHECK(shade_bid_uniform(2, 1, rat(1, 2)) == rat(1, 4));
    CHECK(shade_bid_uniform(2, 1, 0.8) == doctest::Approx(0.4));
}

TEST_CASE("shade endpoints and parameter validation") {
    CHECK(shade_bid_uniform(4, 2, rat(0)) == 0);
    CHECK(shade_bid_uniform(4, 2, rat(1)) == rat(1, 2));  // (n-k)/n at v=1
    CHECK_THROWS_AS(shade_bid_uniform(3, 3, rat(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(shade_bid_uniform(20, 11, rat(1, 2)), std::domain_error);
    CHECK_NOTHROW(shade_bid_uniform(20, 11, rat(1, 2), /*allow_unverified=*/true));
}

TEST_CASE("shade is monotone and respects the (n-k)/n v lower bound, exactly") {
    for (int n = 2; n <= 10; ++n) {
        for (int k = 1; k <= std::min(n - 1, 10); ++k) {
            Rat prev = 0;
            for (int j = 1; j <= 20; ++j) {
                const Rat v = rat(j, 20);
                const Rat s = shade_bid_uniform(n, k, v);
                CHECK(s > prev);
                CHECK(s >= rat(n - k, n) * v);
                CHECK(s <= v);
                prev = s;
            }
        }
    }
}

TEST_CASE("win probability") {
    CHECK(win_probability(4, 2, 0.5) == doctest::Approx(0.5));
    CHECK(win_probability(2, 1, 0.3) == doctest::Approx(0.3));
    CHECK(win_probability(5, 5, 0.1) == doctest::Approx(1.0));
    CHECK(win_probability(3, 1, 1.0) == doctest::Approx(1.0));
    CHECK(win_probability(3, 1, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("inverse shade round-trips") {
    for (double v : {0.1, 0.4, 0.7, 0.95}) {
        const double b = shade_bid_uniform(6, 2, v);
        CHECK(inverse_shade_uniform(6, 2, b) == doctest::Approx(v).epsilon(1e-9));
    }
    CHECK(inverse_shade_uniform(6, 2, 0.0) == 0.0);
    CHECK(inverse_shade_uniform(6, 2, 10.0) == 1.0);  // above s(1)
}

TEST_CASE("best-response gap is small at the equilibrium") {
    CHECK(best_response_gap(2, 1, 0.5, 1e-3) <= 2e-3);
    CHECK(best_response_gap(6, 3, 0.8, 1e-3) <= 2e-3);
    CHECK(best_response_gap(4, 2, 0.0, 1e-3) == 0.0);
    CHECK_THROWS_AS(best_response_gap(4, 2, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("deviating far from the equilibrium bid is detectably worse") {
    // utility of bidding s(t) with t far from v must fall short of equilibrium
    const int n = 5, k = 2;
    const double v = 0.8;
    const double eq = win_probability(n, k, v) * (v - shade_bid_uniform(n, k, v));
    for (double t : {0.2, 0.4, 0.99}) {
        const double u = win_probability(n, k, t) * (v - shade_bid_uniform(n, k, t));
        CHECK(u < eq + 1e-12);
    }
}

TEST_CASE("uniform order statistics: mean (n+1-i)/(n+1), total n/2") {
    CHECK(uniform_order_stat_mean(4, 1) == rat(4, 5));
    CHECK(uniform_order_stat_mean(4, 4) == rat(1, 5));
    for (int n : {3, 7, 12}) {
        Rat total = 0;
        for (int i = 1; i <= n; ++i) total += uniform_order_stat_mean(n, i);
        CHECK(total == rat(n, 2));
    }
    CHECK_THROWS_AS(uniform_order_stat_mean(4, 0), std::out_of_range);
}

TEST_CASE("harmonic numbers are exact") {
    CHECK(harmonic(0) == 0);
    CHECK(harmonic(1) == 1);
    CHECK(harmonic(4) == rat(25, 12));
    CHECK(harmonic(10) == rat(7381, 2520));
}

TEST_CASE("exponential order statistics: telescoping total n/zeta") {
    CHECK(exponential_order_stat_mean(4, 1, 1) == rat(25, 12));  // H_4
    CHECK(exponential_order_stat_mean(4, 2, 1) == rat(25, 12) - 1);
    for (int n : {3, 8}) {
        const Rat zeta = rat(2);
        Rat total = 0;
        for (int i = 1; i <= n; ++i) total += exponential_order_stat_mean(n, i, zeta);
        CHECK(total == rat(n) / zeta);  // sum of n iid EXP(zeta) means
    }
    CHECK_THROWS_AS(exponential_order_stat_mean(4, 1, rat(0)), std::invalid_argument);
}
