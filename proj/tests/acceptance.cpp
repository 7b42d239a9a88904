// Acceptance gate: one pass/fail line per criterion, pinned tolerances.
// Grid results certify the finite grid only; they are evidence, not proofs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "tfm/equilibrium.hpp"
#include "tfm/properties.hpp"
#include "tfm/revenue.hpp"

using namespace tfm;

namespace {

constexpr long long kSamples = 1'000'000;

struct Outcome2 {
    bool passed;
    std::string detail;
};

bool replays_exactly(const Mechanism& mech, const PropertyReport& report) {
    if (!report.counterexample) return false;
    const ReplayResult replay =
        replay_counterexample(mech, report.property, *report.counterexample);
    return replay.baseline_utility == report.counterexample->baseline_utility &&
           replay.deviation_utility == report.counterexample->deviation_utility &&
           replay.deviation_utility > replay.baseline_utility;
}

// ---- criterion bodies ------------------------------------------------------

Outcome2 c1_gta_desiderata() {
    CheckConfig cfg;  // n=3, grid {0..3}, max_fake=2, coalition All
    const auto gta = make_mechanism(MechanismSpec::Gta());
    std::string detail;
    bool ok = true;
    for (Property p : {Property::DSIC, Property::MMIC, Property::OCA, Property::SCP,
                       Property::EPIR, Property::EPBB}) {
        const PropertyReport r = run_check(*gta, p, cfg);
        detail += to_string(p) + "=" + to_string(r.verdict) + " ";
        ok = ok && r.verdict == Verdict::HoldsOnGrid;
    }
    return {ok, detail};
}

Outcome2 c2_counterexamples() {
    bool ok = true;
    std::string detail;

    CheckConfig cfg;
    const auto pabga = make_mechanism(MechanismSpec::Pabga(1));
    const PropertyReport dsic = check_dsic(*pabga, cfg);
    const bool dsic_ok = dsic.verdict == Verdict::Violated && replays_exactly(*pabga, dsic);
    detail += std::string("PABGA-DSIC=") + (dsic_ok ? "violated+replayed " : "MISSING ");
    ok = ok && dsic_ok;

    const auto upga1 = make_mechanism(MechanismSpec::Upga(1));
    const PropertyReport mmic = check_mmic(*upga1, cfg);
    const bool mmic_ok = mmic.verdict == Verdict::Violated &&
                         mmic.counterexample && !mmic.counterexample->fake_bids.empty() &&
                         replays_exactly(*upga1, mmic);
    detail += std::string("UPGA-MMIC=") + (mmic_ok ? "violated+replayed " : "MISSING ");
    ok = ok && mmic_ok;

    CheckConfig scp_cfg;
    scp_cfg.coalition_bound = 2;
    const auto upga2 = make_mechanism(MechanismSpec::Upga(2));
    const PropertyReport scp = check_scp(*upga2, scp_cfg);
    const bool scp_ok = scp.verdict == Verdict::Violated && scp.counterexample &&
                        !scp.counterexample->coalition.empty() &&
                        replays_exactly(*upga2, scp);
    detail += std::string("UPGA-SCP=") + (scp_ok ? "violated+replayed " : "MISSING ");
    ok = ok && scp_ok;

    CheckConfig oca_cfg;
    oca_cfg.n = 2;
    oca_cfg.grid_max = 1;
    oca_cfg.step = rat(1, 4);
    const auto myerson = make_mechanism(MechanismSpec::Myerson(1));
    const PropertyReport oca = check_oca(*myerson, oca_cfg);
    const bool oca_ok = oca.verdict == Verdict::Violated && replays_exactly(*myerson, oca);
    detail += std::string("Myerson-OCA=") + (oca_ok ? "violated+replayed" : "MISSING");
    ok = ok && oca_ok;

    return {ok, detail};
}

Outcome2 c3_oca_structure() {
    CheckConfig cfg;  // n=3, grid {0..3}
    const auto pabga = make_mechanism(MechanismSpec::Pabga(2));
    const auto wr = make_mechanism(MechanismSpec::WellReservedTfm(2, 1));
    const fixtures::ValueDependentBurn bad(2);
    const bool p = validate_oca_structure(*pabga, cfg).verdict == Verdict::HoldsOnGrid;
    const bool w = validate_oca_structure(*wr, cfg).verdict == Verdict::HoldsOnGrid;
    const PropertyReport f = validate_oca_structure(bad, cfg);
    const bool bad_fails = f.verdict == Verdict::Violated;
    return {p && w && bad_fails,
            std::string("PABGA=") + (p ? "pass" : "FAIL") + " WellReserved=" +
                (w ? "pass" : "FAIL") + " value-burn-fixture=" +
                (bad_fails ? "rejected" : "ACCEPTED")};
}

Outcome2 c4_gta_revenue_exact() {
    CheckConfig cfg;
    cfg.n = 4;
    cfg.grid_max = 4;
    const auto gta = make_mechanism(MechanismSpec::Gta());
    // direct sweep: revenue == allocated count with zero tolerance
    bool equal = true;
    std::vector<int> idx(4, 0);
    std::vector<Rat> bids(4, 0);
    while (true) {
        const Outcome out = gta->evaluate_intended(bids);
        if (miner_utility(out, BidProfile(bids, 4)) != out.allocated_count())
            equal = false;
        int p = 3;
        while (p >= 0 && idx[p] == 4) { idx[p] = 0; bids[p] = 0; --p; }
        if (p < 0) break;
        ++idx[p];
        bids[p] = rat(idx[p]);
    }
    const PropertyReport audit = audit_revenue_bound(*gta, cfg);
    bool noted = false;
    for (const auto& n : audit.notes)
        if (n == "revenue equals allocated count on every profile") noted = true;
    return {equal && audit.verdict == Verdict::HoldsOnGrid && noted,
            std::string("sweep=") + (equal ? "equal" : "UNEQUAL") +
                " audit=" + to_string(audit.verdict)};
}

Outcome2 c5_non_constant_delta() {
    const auto p3 = mc_revenue_and_surplus(MechanismSpec::Pabga(3), Distribution::Uni(),
                                           4, kSamples, 1);
    const auto p2 = mc_revenue_and_surplus(MechanismSpec::Pabga(2), Distribution::Uni(),
                                           4, kSamples, 2);
    const auto sl = mc_revenue_and_surplus(MechanismSpec::SupplyLimited(3, 2),
                                           Distribution::Uni(), 4, kSamples, 3);
    const bool a = std::abs(p3.revenue.mean - 0.6) <= 3.0 * p3.revenue.stderr_;
    const bool b = std::abs(p2.revenue.mean - 0.8) <= 3.0 * p2.revenue.stderr_;
    const bool c = sl.revenue.mean > p3.revenue.mean;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "PABGA(3)=%.4f PABGA(2)=%.4f SupplyLimited=%.4f",
                  p3.revenue.mean, p2.revenue.mean, sl.revenue.mean);
    return {a && b && c, buf};
}

Outcome2 c6_uniform_ratio() {
    bool ok = true;
    std::string detail;
    for (auto [n, k] : {std::pair{4, 2}, std::pair{10, 3}, std::pair{20, 5}}) {
        const auto mc = mc_revenue_and_surplus(MechanismSpec::Pabga(k),
                                               Distribution::Uni(), n, kSamples, 10 + n);
        const double ratio = mc.revenue.mean / mc.surplus.mean;
        const double rel = std::sqrt(
            std::pow(mc.revenue.stderr_ / mc.revenue.mean, 2) +
            std::pow(mc.surplus.stderr_ / mc.surplus.mean, 2));
        const double stderr_ = std::abs(ratio) * rel;
        const double exact = to_double(uniform_ratio_of_expectations(n, k));
        const bool pass = std::abs(ratio - exact) <= 3.0 * stderr_;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "(%d,%d)=%.4f~%.4f ", n, k, ratio, exact);
        detail += buf;
        ok = ok && pass;
    }
    return {ok, detail};
}

Outcome2 c7_expectation_of_ratio() {
    bool ok = true;
    std::string detail;
    for (auto [n, k] : {std::pair{4, 2}, std::pair{10, 3}, std::pair{12, 10}}) {
        const RatioCheckReport r = expectation_of_ratio_check(n, k, kSamples, 20 + n);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "(%d,%d)=%.4f>=%.4f%s ", n, k, r.ratio.mean,
                      r.bound, r.pointwise_ok ? "" : "!pointwise");
        detail += buf;
        ok = ok && r.passed && r.pointwise_ok;
    }
    return {ok, detail};
}

Outcome2 c8_exponential_ratio() {
    const Rat ratio = exponential_ratio_of_expectations(10'000, 100, 1);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "ratio=%.6f", to_double(ratio));
    return {ratio >= rat(45, 100), buf};
}

Outcome2 c9_bulow_klemperer() {
    bool ok = true;
    std::string detail;
    for (auto [n, k] : {std::pair{2, 1}, std::pair{10, 3}, std::pair{10, 9}}) {
        const BulowKlempererReport bk = bulow_klemperer_check(n, k, kSamples, 30 + n + k);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "(%d,%d)=%.4f>=%.4f ", n, k, bk.pabga.mean,
                      bk.rhs);
        detail += buf;
        ok = ok && bk.passed;
    }
    return {ok, detail};
}

Outcome2 c10_equilibrium() {
    double worst = 0.0;
    for (int n = 2; n <= 12; ++n) {
        for (int k = 1; k <= std::min(n - 1, 10); ++k) {
            for (int j = 1; j <= 9; ++j) {
                const double gap = best_response_gap(n, k, 0.1 * j, 1e-3);
                if (gap > worst) worst = gap;
            }
        }
    }
    // exact monotonicity and shading-bound sweeps
    bool sweeps = true;
    for (int n = 2; n <= 12 && sweeps; ++n) {
        for (int k = 1; k <= std::min(n - 1, 10) && sweeps; ++k) {
            Rat prev = -1;
            for (int j = 0; j <= 20; ++j) {
                const Rat v = rat(j, 20);
                const Rat s = shade_bid_uniform(n, k, v);
                if (s <= prev || s < rat(n - k, n) * v || s > v) {
                    sweeps = false;
                    break;
                }
                prev = s;
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max_gap=%.2e sweeps=%s", worst,
                  sweeps ? "pass" : "FAIL");
    return {worst <= 2e-3 && sweeps, buf};
}

Outcome2 c11_revenue_optimal_class() {
    bool ok = true;
    std::string detail;
    for (int n : {4, 10}) {
        for (int k : {2, 3}) {
            const auto pabga = mc_revenue_and_surplus(
                MechanismSpec::Pabga(k), Distribution::Uni(), n, kSamples, 40 + n + k);
            for (double r : {0.0, 0.25, 0.5}) {
                const auto wr = mc_revenue_and_surplus(
                    MechanismSpec::WellReservedTfm(k, rat_from_double(r)),
                    Distribution::Uni(), n, kSamples, 50 + n + k);
                const double combined =
                    std::hypot(pabga.revenue.stderr_, wr.revenue.stderr_);
                if (pabga.revenue.mean < wr.revenue.mean - 3.0 * combined) {
                    char buf[96];
                    std::snprintf(buf, sizeof(buf), "FAIL(n=%d,k=%d,r=%.2f) ", n, k, r);
                    detail += buf;
                    ok = false;
                }
            }
        }
    }
    if (ok) detail = "PABGA dominates WellReserved on all 12 (n,k,r) cells";
    return {ok, detail};
}

std::string run_cli(const std::string& args, const std::string& capture_path) {
    const std::string cmd = std::string(TFM_LAB_BIN) + " " + args + " > " +
                            capture_path + " 2>&1";
    std::system(cmd.c_str());
    std::ifstream f(capture_path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome2 c12_determinism() {
    const std::string args = "verify-claims --seed 1 --samples 10000";
    const std::string a = run_cli(args, "acceptance_run_a.txt");
    const std::string b = run_cli(args, "acceptance_run_b.txt");
    const bool ok = !a.empty() && a == b;
    return {ok, ok ? "two runs byte-identical (" + std::to_string(a.size()) + " bytes)"
                   : "runs differ"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome2()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "GTA desiderata exhaustive", 60, c1_gta_desiderata},
        {2, "counterexample suite replays", 60, c2_counterexamples},
        {3, "OCA structural validator", 30, c3_oca_structure},
        {4, "GTA revenue equals allocated count", 60, c4_gta_revenue_exact},
        {5, "non-constant burn-diff example", 60, c5_non_constant_delta},
        {6, "uniform ratio of expectations", 120, c6_uniform_ratio},
        {7, "uniform expectation of ratio", 120, c7_expectation_of_ratio},
        {8, "exponential ratio, exact harmonics", 5, c8_exponential_ratio},
        {9, "Bulow-Klemperer comparison", 120, c9_bulow_klemperer},
        {10, "equilibrium best-response gap", 120, c10_equilibrium},
        {11, "revenue-optimal well-reserved class", 120, c11_revenue_optimal_class},
        {12, "verify-claims determinism", 300, c12_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome2 result{false, "exception"};
        try {
            result = c.run();
        } catch (const std::exception& e) {
            result.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        const bool in_time = elapsed <= c.limit_seconds;
        const bool pass = result.passed && in_time;
        std::printf("criterion %2d: %s  %-38s (%.1fs/%gs)  %s\n", c.id,
                    pass ? "PASS" : "FAIL", c.name, elapsed, c.limit_seconds,
                    result.detail.c_str());
        if (!pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
