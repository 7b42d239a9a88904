#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tfm/mechanisms.hpp"
#include "tfm/rational.hpp"

namespace tfm {

enum class Dist { Uniform, Exponential };

struct Distribution {
    Dist kind = Dist::Uniform;
    double zeta = 1.0;  // rate, exponential only

    static Distribution Uni() { return {Dist::Uniform, 0.0}; }
    static Distribution Exp(double zeta) { return {Dist::Exponential, zeta}; }
    std::string name() const {
        return kind == Dist::Uniform ? "UNI" : "EXP(" + std::to_string(zeta) + ")";
    }
};

struct RevenueEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample sd / sqrt(samples)
    long long samples = 0;
    uint64_t seed = 0;
    std::optional<Rat> exact;  // closed form when available
};

// Fixed partition count: results are bit-identical for a given
// (seed, samples) regardless of available hardware parallelism.
inline constexpr int kMcPartitions = 8;

struct McResult {
    RevenueEstimate revenue;
    RevenueEstimate surplus;
    RevenueEstimate ratio;        // per-sample revenue/surplus
    long long ratio_excluded = 0;  // samples dropped because surplus was 0
};

// Draws n iid valuations per sample and applies the mechanism's equilibrium
// bidding: truthful for the UPGA-priced mechanisms and GTA, the uniform BNE
// shade s(v) for PABGA / Shading / SupplyLimitedPABGA (uniform only).
McResult mc_revenue_and_surplus(const MechanismSpec& spec, const Distribution& dist,
                                int n, long long samples, uint64_t seed);

// Rev^PABGA under uniform iid values: k(n-k)/(n+1).
Rat uniform_pabga_revenue_exact(int n, int k);

// E[Rev]/E[V] under uniform iid values: (n-k)/(n+1-(k+1)/2).
Rat uniform_ratio_of_expectations(int n, int k);

// E[Rev]/E[V] under exponential iid values; the rate cancels:
// k(H_n - H_k) / sum_{i=1..k}(H_n - H_{i-1}).
Rat exponential_ratio_of_expectations(int n, int k, const Rat& zeta);

struct BulowKlempererReport {
    RevenueEstimate pabga;
    RevenueEstimate myerson;  // UPGA with reserve 1/2, the uniform-optimal auction
    double rhs = 0.0;         // ((n-k)/n) * myerson.mean
    double slack = 0.0;       // pabga.mean - rhs, in units of combined stderr
    bool passed = false;
};
BulowKlempererReport bulow_klemperer_check(int n, int k, long long samples,
                                           uint64_t seed);

struct RevenueEquivalenceReport {
    RevenueEstimate pabga;
    RevenueEstimate upga;
    Rat exact;  // k(n-k)/(n+1)
    bool passed = false;
};
RevenueEquivalenceReport revenue_equivalence_check(int n, int k, long long samples,
                                                   uint64_t seed);

struct RatioCheckReport {
    RevenueEstimate ratio;     // MC estimate of E[Rev/V] for PABGA
    double bound = 0.0;        // (n-k)/n
    bool pointwise_ok = false;  // s(v) >= ((n-k)/n) v on every drawn value
    long long excluded = 0;
    bool passed = false;
};
RatioCheckReport expectation_of_ratio_check(int n, int k, long long samples,
                                            uint64_t seed);

}  // namespace tfm
