#include "tfm/revenue.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include "tfm/equilibrium.hpp"
#include "tfm/rng.hpp"

namespace tfm {

namespace {

struct Accumulator {
    double sum = 0.0, sum_sq = 0.0;
    long long count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
    // Deterministic merge: always called in partition order.
    void merge(const Accumulator& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    RevenueEstimate estimate(uint64_t seed) const {
        RevenueEstimate e;
        e.samples = count;
        e.seed = seed;
        if (count == 0) return e;
        e.mean = sum / static_cast<double>(count);
        if (count > 1) {
            const double var =
                std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(count - 1));
            e.stderr_ = std::sqrt(var / static_cast<double>(count));
        }
        return e;
    }
};

struct SampleStats {
    Accumulator revenue, surplus, ratio;
    long long ratio_excluded = 0;
};

double draw_value(SampleRng& rng, const Distribution& dist) {
    const double u = rng.uniform();
    if (dist.kind == Dist::Uniform) return u;
    // inverse CDF; 1-u avoids log(0)
    return -std::log1p(-u) / dist.zeta;
}

// One-round revenue and surplus under the mechanism's equilibrium bidding,
// evaluated in doubles. `values` is clobbered (sorted descending).
struct Round {
    double revenue;
    double surplus;
};

Round evaluate_round(const MechanismSpec& spec, std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    std::sort(values.begin(), values.end(), std::greater<double>());
    Round r{0.0, 0.0};
    switch (spec.variant) {
        case Variant::GTA: {
            int count = 0;
            for (double v : values)
                if (v >= 1.0) {
                    ++count;
                    r.surplus += v;
                }
            r.revenue = count;  // each allocated bid pays 1
            return r;
        }
        case Variant::PABGA:
        case Variant::Shading: {
            const int k = std::min(spec.block.k, n);
            for (int i = 0; i < k; ++i) {
                r.surplus += values[i];
                r.revenue += shade_bid_uniform(n, spec.block.k, values[i]);
            }
            return r;
        }
        case Variant::SupplyLimitedPABGA: {
            // Equivalent to PABGA with block `limit`; bidders shade accordingly.
            const int k = std::min(spec.limit, n);
            for (int i = 0; i < k; ++i) {
                r.surplus += values[i];
                r.revenue += shade_bid_uniform(n, spec.limit, values[i]);
            }
            return r;
        }
        case Variant::UPGA:
        case Variant::WellReserved:
        case Variant::MyersonUniform: {
            const double reserve = to_double(spec.reserve);
            const int k = spec.block.k;
            const double price =
                std::max(reserve, k < n ? values[k] : 0.0);
            const double per_bid_burn =
                spec.variant == Variant::WellReserved ? reserve : 0.0;
            for (int i = 0; i < std::min(k, n); ++i) {
                if (values[i] < reserve) break;
                r.surplus += values[i];
                r.revenue += price - per_bid_burn;
            }
            return r;
        }
    }
    throw std::logic_error("unknown mechanism variant");
}

void validate_pairing(const MechanismSpec& spec, const Distribution& dist) {
    const bool shaded = spec.variant == Variant::PABGA ||
                        spec.variant == Variant::Shading ||
                        spec.variant == Variant::SupplyLimitedPABGA;
    if (shaded && dist.kind != Dist::Uniform)
        throw std::invalid_argument(
            "the shading equilibrium is only available for Uniform(0,1)");
}

SampleStats run_partition(const MechanismSpec& spec, const Distribution& dist,
                          int n, long long begin, long long end, uint64_t seed) {
    SampleStats stats;
    std::vector<double> values(n);
    for (long long s = begin; s < end; ++s) {
        SampleRng rng(seed, static_cast<uint64_t>(s));
        for (int i = 0; i < n; ++i) values[i] = draw_value(rng, dist);
        const Round r = evaluate_round(spec, values);
        stats.revenue.add(r.revenue);
        stats.surplus.add(r.surplus);
        if (r.surplus == 0.0)
            ++stats.ratio_excluded;
        else
            stats.ratio.add(r.revenue / r.surplus);
    }
    return stats;
}

}  // namespace

McResult mc_revenue_and_surplus(const MechanismSpec& spec, const Distribution& dist,
                                int n, long long samples, uint64_t seed) {
    if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");
    if (n < 1) throw std::invalid_argument("need n >= 1");
    validate_pairing(spec, dist);
    // Shading parameters are fixed per sample count, so validate once up front.
    if (spec.variant == Variant::PABGA || spec.variant == Variant::Shading) {
        if (spec.block.k >= n || spec.block.k > kMaxVerifiedBlock)
            throw std::invalid_argument("shading equilibrium needs k < n and k <= 10");
    }
    if (spec.variant == Variant::SupplyLimitedPABGA &&
        (spec.limit >= n || spec.limit > kMaxVerifiedBlock))
        throw std::invalid_argument("shading equilibrium needs limit < n and limit <= 10");

    const long long chunk = (samples + kMcPartitions - 1) / kMcPartitions;
    std::vector<std::future<SampleStats>> parts;
    for (int p = 0; p < kMcPartitions; ++p) {
        const long long begin = std::min<long long>(samples, p * chunk);
        const long long end = std::min<long long>(samples, begin + chunk);
        parts.push_back(std::async(std::launch::async, run_partition, spec, dist, n,
                                   begin, end, seed));
    }
    SampleStats total;
    for (auto& f : parts) {
        const SampleStats s = f.get();
        total.revenue.merge(s.revenue);
        total.surplus.merge(s.surplus);
        total.ratio.merge(s.ratio);
        total.ratio_excluded += s.ratio_excluded;
    }

    McResult result;
    result.revenue = total.revenue.estimate(seed);
    result.surplus = total.surplus.estimate(seed);
    result.ratio = total.ratio.estimate(seed);
    result.ratio_excluded = total.ratio_excluded;
    if (dist.kind == Dist::Uniform &&
        (spec.variant == Variant::PABGA || spec.variant == Variant::Shading) &&
        spec.block.k <= n)
        result.revenue.exact = uniform_pabga_revenue_exact(n, spec.block.k);
    return result;
}

Rat uniform_pabga_revenue_exact(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
    return rat(static_cast<long>(k) * (n - k), n + 1);
}

Rat uniform_ratio_of_expectations(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
    // (n-k) / (n+1 - (k+1)/2)
    return rat(n - k) / (rat(n + 1) - rat(k + 1, 2));
}

Rat exponential_ratio_of_expectations(int n, int k, const Rat& zeta) {
    if (k < 1 || k >= n) throw std::invalid_argument("need 1 <= k < n");
    if (zeta <= 0) throw std::invalid_argument("zeta must be positive");
    const Rat hn = harmonic(n);
    Rat surplus = 0;  // zeta cancels between revenue and surplus
    for (int i = 1; i <= k; ++i) surplus += hn - harmonic(i - 1);
    return rat(k) * (hn - harmonic(k)) / surplus;
}

BulowKlempererReport bulow_klemperer_check(int n, int k, long long samples,
                                           uint64_t seed) {
    if (k >= n) throw std::invalid_argument("need k < n");
    BulowKlempererReport report;
    report.pabga =
        mc_revenue_and_surplus(MechanismSpec::Pabga(k), Distribution::Uni(), n,
                               samples, seed)
            .revenue;
    report.myerson =
        mc_revenue_and_surplus(MechanismSpec::Myerson(k), Distribution::Uni(), n,
                               samples, seed + 1)
            .revenue;
    const double factor = static_cast<double>(n - k) / n;
    report.rhs = factor * report.myerson.mean;
    const double combined = std::hypot(report.pabga.stderr_,
                                       factor * report.myerson.stderr_);
    report.slack = combined > 0 ? (report.pabga.mean - report.rhs) / combined : 0.0;
    report.passed = report.pabga.mean >= report.rhs - 3.0 * combined;
    return report;
}

RevenueEquivalenceReport revenue_equivalence_check(int n, int k, long long samples,
                                                   uint64_t seed) {
    if (k > kMaxVerifiedBlock) throw std::invalid_argument("need k <= 10");
    if (k >= n) throw std::invalid_argument("need k < n");
    RevenueEquivalenceReport report;
    report.exact = uniform_pabga_revenue_exact(n, k);
    report.pabga =
        mc_revenue_and_surplus(MechanismSpec::Pabga(k), Distribution::Uni(), n,
                               samples, seed)
            .revenue;
    report.upga =
        mc_revenue_and_surplus(MechanismSpec::Upga(k), Distribution::Uni(), n,
                               samples, seed + 1)
            .revenue;
    const double exact = to_double(report.exact);
    const double combined = std::hypot(report.pabga.stderr_, report.upga.stderr_);
    report.passed =
        std::abs(report.pabga.mean - report.upga.mean) <= 3.0 * combined &&
        std::abs(report.pabga.mean - exact) <= 3.0 * report.pabga.stderr_ &&
        std::abs(report.upga.mean - exact) <= 3.0 * report.upga.stderr_;
    return report;
}

RatioCheckReport expectation_of_ratio_check(int n, int k, long long samples,
                                            uint64_t seed) {
    if (k > kMaxVerifiedBlock) throw std::invalid_argument("need k <= 10");
    if (k >= n) throw std::invalid_argument("need k < n");
    RatioCheckReport report;
    report.bound = static_cast<double>(n - k) / n;

    // Same sampling scheme as mc_revenue_and_surplus, with the added
    // per-sample pointwise bound s(v) >= ((n-k)/n) v on every drawn value.
    struct PartStats {
        Accumulator ratio;
        long long excluded = 0;
        bool pointwise_ok = true;
    };
    auto run = [&](long long begin, long long end) {
        PartStats stats;
        std::vector<double> values(n);
        const Distribution dist = Distribution::Uni();
        for (long long s = begin; s < end; ++s) {
            SampleRng rng(seed, static_cast<uint64_t>(s));
            for (int i = 0; i < n; ++i) values[i] = draw_value(rng, dist);
            for (double v : values)
                if (shade_bid_uniform(n, k, v) < report.bound * v - 1e-12)
                    stats.pointwise_ok = false;
            const Round r = evaluate_round(MechanismSpec::Pabga(k), values);
            if (r.surplus == 0.0)
                ++stats.excluded;
            else
                stats.ratio.add(r.revenue / r.surplus);
        }
        return stats;
    };

    const long long chunk = (samples + kMcPartitions - 1) / kMcPartitions;
    std::vector<std::future<PartStats>> parts;
    for (int p = 0; p < kMcPartitions; ++p) {
        const long long begin = std::min<long long>(samples, p * chunk);
        const long long end = std::min<long long>(samples, begin + chunk);
        parts.push_back(std::async(std::launch::async, run, begin, end));
    }
    PartStats total;
    for (auto& f : parts) {
        const PartStats s = f.get();
        total.ratio.merge(s.ratio);
        total.excluded += s.excluded;
        total.pointwise_ok = total.pointwise_ok && s.pointwise_ok;
    }
    report.ratio = total.ratio.estimate(seed);
    report.excluded = total.excluded;
    report.pointwise_ok = total.pointwise_ok;
    report.passed = total.pointwise_ok &&
                    report.ratio.mean >= report.bound - 3.0 * report.ratio.stderr_;
    return report;
}

}  // namespace tfm
