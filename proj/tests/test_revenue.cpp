#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tfm/equilibrium.hpp"
#include "tfm/revenue.hpp"

using namespace tfm;

namespace {
constexpr long long kSamples = 100'000;
}

TEST_CASE("exact uniform PABGA revenue k(n-k)/(n+1)") {
    CHECK(uniform_pabga_revenue_exact(4, 3) == rat(3, 5));
    CHECK(uniform_pabga_revenue_exact(4, 2) == rat(4, 5));
    CHECK(uniform_pabga_revenue_exact(7, 7) == 0);
    CHECK_THROWS_AS(uniform_pabga_revenue_exact(3, 4), std::invalid_argument);
}

TEST_CASE("exact uniform ratio of expectations") {
    CHECK(uniform_ratio_of_expectations(4, 2) == rat(4, 7));
    CHECK(uniform_ratio_of_expectations(10, 3) == rat(7, 9));
    CHECK(uniform_ratio_of_expectations(5, 5) == 0);
    CHECK_THROWS_AS(uniform_ratio_of_expectations(2, 3), std::invalid_argument);
}

TEST_CASE("exact exponential ratio of expectations; the rate cancels") {
    CHECK(exponential_ratio_of_expectations(4, 1, 1) == rat(13, 25));
    CHECK(exponential_ratio_of_expectations(9, 3, 1) ==
          exponential_ratio_of_expectations(9, 3, 7));
    CHECK_THROWS_AS(exponential_ratio_of_expectations(4, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(exponential_ratio_of_expectations(4, 1, rat(-1)),
                    std::invalid_argument);
}

TEST_CASE("MC PABGA revenue matches the closed form") {
    const McResult mc = mc_revenue_and_surplus(MechanismSpec::Pabga(1),
                                               Distribution::Uni(), 2, kSamples, 7);
    REQUIRE(mc.revenue.exact.has_value());
    CHECK(*mc.revenue.exact == rat(1, 3));
    CHECK(std::abs(mc.revenue.mean - 1.0 / 3.0) <= 3.0 * mc.revenue.stderr_);
    CHECK(mc.revenue.samples == kSamples);
}

TEST_CASE("MC UPGA revenue matches k(n-k)/(n+1) under truthful play") {
    const McResult mc = mc_revenue_and_surplus(MechanismSpec::Upga(3),
                                               Distribution::Uni(), 10, kSamples, 7);
    CHECK(std::abs(mc.revenue.mean - 21.0 / 11.0) <= 3.0 * mc.revenue.stderr_);
}

TEST_CASE("MC estimates are bit-reproducible for a fixed seed") {
    const auto a = mc_revenue_and_surplus(MechanismSpec::Pabga(2), Distribution::Uni(),
                                          4, kSamples, 42);
    const auto b = mc_revenue_and_surplus(MechanismSpec::Pabga(2), Distribution::Uni(),
                                          4, kSamples, 42);
    CHECK(a.revenue.mean == b.revenue.mean);
    CHECK(a.surplus.mean == b.surplus.mean);
    CHECK(a.ratio.mean == b.ratio.mean);
    const auto c = mc_revenue_and_surplus(MechanismSpec::Pabga(2), Distribution::Uni(),
                                          4, kSamples, 43);
    CHECK(a.revenue.mean != c.revenue.mean);
}

TEST_CASE("revenue never exceeds surplus; ratio stays in [0,1] for PABGA") {
    const McResult mc = mc_revenue_and_surplus(MechanismSpec::Pabga(2),
                                               Distribution::Uni(), 4, kSamples, 3);
    CHECK(mc.revenue.mean < mc.surplus.mean);
    CHECK(mc.ratio.mean > 0.0);
    CHECK(mc.ratio.mean < 1.0);
    CHECK(mc.ratio_excluded == 0);  // surplus is 0 with probability 0
}

TEST_CASE("exponential surplus uses the exact order-statistic sum") {
    // E[surplus] for UPGA(k) truthful = sum of top-k exponential order stats
    const McResult mc = mc_revenue_and_surplus(MechanismSpec::Upga(2),
                                               Distribution::Exp(1.0), 6, kSamples, 9);
    double expected = 0.0;
    for (int i = 1; i <= 2; ++i)
        expected += to_double(exponential_order_stat_mean(6, i, 1));
    CHECK(std::abs(mc.surplus.mean - expected) <= 3.0 * mc.surplus.stderr_);
}

TEST_CASE("shaded mechanisms reject non-uniform distributions") {
    CHECK_THROWS_AS(mc_revenue_and_surplus(MechanismSpec::Pabga(2),
                                           Distribution::Exp(1.0), 4, kSamples, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_revenue_and_surplus(MechanismSpec::Pabga(4),
                                           Distribution::Uni(), 4, kSamples, 0),
                    std::invalid_argument);  // needs k < n
    CHECK_THROWS_AS(mc_revenue_and_surplus(MechanismSpec::Pabga(2),
                                           Distribution::Uni(), 4, 10, 0),
                    std::invalid_argument);  // too few samples
}

TEST_CASE("WellReserved revenue equals UPGA revenue minus the burn") {
    const auto upga = mc_revenue_and_surplus(
        MechanismSpec::Upga(2, rat(1, 4)), Distribution::Uni(), 4, kSamples, 5);
    const auto wr = mc_revenue_and_surplus(
        MechanismSpec::WellReservedTfm(2, rat(1, 4)), Distribution::Uni(), 4, kSamples, 5);
    // identical seeds: same draws, same winners; each winner burns 1/4
    CHECK(upga.revenue.mean > wr.revenue.mean);
    CHECK(upga.surplus.mean == wr.surplus.mean);
}

TEST_CASE("bulow-klemperer comparison holds for (2,1)") {
    const BulowKlempererReport bk = bulow_klemperer_check(2, 1, kSamples, 11);
    CHECK(bk.passed);
    CHECK(bk.pabga.mean == doctest::Approx(1.0 / 3.0).epsilon(0.05));
    CHECK_THROWS_AS(bulow_klemperer_check(2, 2, kSamples, 0), std::invalid_argument);
}

TEST_CASE("payment equivalence: PABGA and UPGA agree for (4,2) and (5,1)") {
    for (auto [n, k] : {std::pair{4, 2}, std::pair{5, 1}}) {
        const RevenueEquivalenceReport eq = revenue_equivalence_check(n, k, kSamples, 13);
        CHECK(eq.passed);
        CHECK(eq.exact == uniform_pabga_revenue_exact(n, k));
    }
}

TEST_CASE("expectation of the ratio stays above (n-k)/n") {
    const RatioCheckReport r = expectation_of_ratio_check(4, 2, kSamples, 17);
    CHECK(r.passed);
    CHECK(r.pointwise_ok);
    CHECK(r.bound == doctest::Approx(0.5));
    CHECK(r.ratio.mean >= 0.5 - 3.0 * r.ratio.stderr_);
    CHECK(r.excluded == 0);
}
