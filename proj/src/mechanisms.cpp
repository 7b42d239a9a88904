#include "tfm/mechanisms.hpp"

#include <algorithm>
#include <stdexcept>

#include "tfm/equilibrium.hpp"

namespace tfm {

MechanismSpec MechanismSpec::Gta() {
    MechanismSpec s;
    s.variant = Variant::GTA;
    s.block = BlockSize::Infinite();
    s.reserve = 1;
    s.bid_space = BidSpace::Discrete;
    s.step = 1;
    return s;
}

MechanismSpec MechanismSpec::Pabga(int k) {
    MechanismSpec s;
    s.variant = Variant::PABGA;
    s.block = BlockSize::Finite(k);
    return s;
}

MechanismSpec MechanismSpec::Upga(int k, Rat reserve) {
    MechanismSpec s;
    s.variant = Variant::UPGA;
    s.block = BlockSize::Finite(k);
    s.reserve = std::move(reserve);
    return s;
}

MechanismSpec MechanismSpec::ShadingAuction(int n, int k) {
    MechanismSpec s;
    s.variant = Variant::Shading;
    s.block = BlockSize::Finite(k);
    s.shading_n = n;
    return s;
}

MechanismSpec MechanismSpec::WellReservedTfm(int k, Rat reserve) {
    MechanismSpec s;
    s.variant = Variant::WellReserved;
    s.block = BlockSize::Finite(k);
    s.reserve = std::move(reserve);
    return s;
}

MechanismSpec MechanismSpec::SupplyLimited(int k, int limit) {
    if (limit < 1 || limit > k) throw std::invalid_argument("need 1 <= limit <= k");
    MechanismSpec s;
    s.variant = Variant::SupplyLimitedPABGA;
    s.block = BlockSize::Finite(k);
    s.limit = limit;
    return s;
}

MechanismSpec MechanismSpec::Myerson(int k, Rat reserve) {
    MechanismSpec s;
    s.variant = Variant::MyersonUniform;
    s.block = BlockSize::Finite(k);
    s.reserve = std::move(reserve);
    return s;
}

std::string MechanismSpec::name() const {
    switch (variant) {
        case Variant::GTA: return "GTA";
        case Variant::PABGA: return "PABGA(" + std::to_string(block.k) + ")";
        case Variant::UPGA:
            return "UPGA(" + std::to_string(block.k) + ",r=" + to_string(reserve) + ")";
        case Variant::Shading:
            return "Shading(n=" + std::to_string(shading_n) +
                   ",k=" + std::to_string(block.k) + ")";
        case Variant::WellReserved:
            return "WellReserved(" + std::to_string(block.k) + ",r=" + to_string(reserve) + ")";
        case Variant::SupplyLimitedPABGA:
            return "SupplyLimitedPABGA(" + std::to_string(block.k) + ",limit=" +
                   std::to_string(limit) + ")";
        case Variant::MyersonUniform:
            return "MyersonUniform(" + std::to_string(block.k) + ",r=" + to_string(reserve) + ")";
    }
    return "?";
}

bool Mechanism::allocation_feasible(const std::vector<Rat>& bids,
                                    const std::vector<int>& alloc) const {
    int count = 0;
    const Rat res = reserve();
    for (size_t i = 0; i < bids.size(); ++i) {
        if (!alloc[i]) continue;
        ++count;
        if (bids[i] < res) return false;
    }
    const BlockSize block = block_size();
    if (block.finite && count > block.k) return false;
    const std::vector<Rat> pay = payments(bids, alloc);
    for (size_t i = 0; i < bids.size(); ++i)
        if (alloc[i] && pay[i] > bids[i]) return false;  // EPIR: cannot overcharge
    return true;
}

Outcome Mechanism::evaluate(const std::vector<Rat>& bids,
                            const std::vector<int>& alloc) const {
    Outcome out;
    out.allocated = alloc;
    out.payments = payments(bids, alloc);
    out.burns = burns(bids, alloc, out.payments);
    return out;
}

Outcome Mechanism::evaluate_intended(const std::vector<Rat>& bids) const {
    return evaluate(bids, intended_allocation(bids));
}

namespace {

// (k+1)-th highest of all pending bids, 0 when fewer than k+1 exist.
Rat kth_plus_one_highest(std::vector<Rat> bids, int k) {
    if (static_cast<int>(bids.size()) <= k) return 0;
    std::sort(bids.begin(), bids.end(), std::greater<Rat>());
    return bids[k];
}

class GtaMechanism final : public Mechanism {
  public:
    BlockSize block_size() const override { return BlockSize::Infinite(); }
    Rat reserve() const override { return 1; }
    std::vector<int> intended_allocation(const std::vector<Rat>& bids) const override {
        return top_k_allocation(bids, BlockSize::Infinite(), 1);
    }
    std::vector<Rat> payments(const std::vector<Rat>& bids,
                              const std::vector<int>& alloc) const override {
        std::vector<Rat> pay(bids.size(), 0);
        for (size_t i = 0; i < bids.size(); ++i)
            if (alloc[i]) pay[i] = 1;
        return pay;
    }
    std::vector<Rat> burns(const std::vector<Rat>& bids, const std::vector<int>&,
                           const std::vector<Rat>&) const override {
        return std::vector<Rat>(bids.size(), 0);
    }
};

class PabgaMechanism final : public Mechanism {
  public:
    explicit PabgaMechanism(BlockSize block) : block_(block) {}
    BlockSize block_size() const override { return block_; }
    std::vector<int> intended_allocation(const std::vector<Rat>& bids) const override {
        return top_k_allocation(bids, block_, 0);
    }
    std::vector<Rat> payments(const std::vector<Rat>& bids,
                              const std::vector<int>& alloc) const override {
        std::vector<Rat> pay(bids.size(), 0);
        for (size_t i = 0; i < bids.size(); ++i)
            if (alloc[i]) pay[i] = bids[i];
        return pay;
    }
    std::vector<Rat> burns(const std::vector<Rat>& bids, const std::vector<int>&,
                           const std::vector<Rat>&) const override {
        return std::vector<Rat>(bids.size(), 0);
    }

  private:
    BlockSize block_;
};

// UPGA(k, r) pricing: every allocated bid pays max(r, (k+1)-th highest of all
// pending bids). WellReserved additionally burns r per allocated bid.
class UpgaPricedMechanism final : public Mechanism {
  public:
    UpgaPricedMechanism(int k, Rat reserve, bool burn_reserve)
        : block_(BlockSize::Finite(k)), reserve_(std::move(reserve)),
          burn_reserve_(burn_reserve) {}

    BlockSize block_size() const override { return block_; }
    Rat reserve() const override { return reserve_; }
    std::vector<int> intended_allocation(const std::vector<Rat>& bids) const override {
        return top_k_allocation(bids, block_, reserve_);
    }
    std::vector<Rat> payments(const std::vector<Rat>& bids,
                              const std::vector<int>& alloc) const override {
        const Rat price = std::max(reserve_, kth_plus_one_highest(bids, block_.k));
        std::vector<Rat> pay(bids.size(), 0);
        for (size_t i = 0; i < bids.size(); ++i)
            if (alloc[i]) pay[i] = price;
        return pay;
    }
    std::vector<Rat> burns(const std::vector<Rat>& bids, const std::vector<int>& alloc,
                           const std::vector<Rat>&) const override {
        std::vector<Rat> burn(bids.size(), 0);
        if (burn_reserve_)
            for (size_t i = 0; i < bids.size(); ++i)
                if (alloc[i]) burn[i] = reserve_;
        return burn;
    }

  private:
    BlockSize block_;
    Rat reserve_;
    bool burn_reserve_;
};

class SupplyLimitedPabga final : public Mechanism {
  public:
    explicit SupplyLimitedPabga(int limit) : limit_(BlockSize::Finite(limit)) {}
    // The supply limit is enforced through an unbounded burn past `limit`
    // allocated bids, so no rational miner ever exceeds it; modeling the cap
    // as the effective block size is equivalent.
    BlockSize block_size() const override { return limit_; }
    std::vector<int> intended_allocation(const std::vector<Rat>& bids) const override {
        return top_k_allocation(bids, limit_, 0);
    }
    std::vector<Rat> payments(const std::vector<Rat>& bids,
                              const std::vector<int>& alloc) const override {
        std::vector<Rat> pay(bids.size(), 0);
        for (size_t i = 0; i < bids.size(); ++i)
            if (alloc[i]) pay[i] = bids[i];
        return pay;
    }
    std::vector<Rat> burns(const std::vector<Rat>& bids, const std::vector<int>&,
                           const std::vector<Rat>&) const override {
        return std::vector<Rat>(bids.size(), 0);
    }

  private:
    BlockSize limit_;
};

}  // namespace

std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec) {
    switch (spec.variant) {
        case Variant::GTA:
            return std::make_unique<GtaMechanism>();
        case Variant::PABGA:
            return std::make_unique<PabgaMechanism>(spec.block);
        case Variant::UPGA:
            return std::make_unique<UpgaPricedMechanism>(spec.block.k, spec.reserve, false);
        case Variant::WellReserved:
            return std::make_unique<UpgaPricedMechanism>(spec.block.k, spec.reserve, true);
        case Variant::MyersonUniform:
            return std::make_unique<UpgaPricedMechanism>(spec.block.k, spec.reserve, false);
        case Variant::SupplyLimitedPABGA:
            return std::make_unique<SupplyLimitedPabga>(spec.limit);
        case Variant::Shading:
            throw std::invalid_argument(
                "the shading auction is value-based; use shading_outcome");
    }
    throw std::logic_error("unknown mechanism variant");
}

Outcome run_mechanism(const MechanismSpec& spec, const BidProfile& profile) {
    if (spec.bid_space == BidSpace::Discrete) {
        for (const Rat& b : profile.bids) {
            Rat q = b / spec.step;
            if (q.get_den() != 1)
                throw std::invalid_argument("bid " + to_string(b) +
                                            " is off the discrete grid (step " +
                                            to_string(spec.step) + ")");
        }
    }
    const auto mech = make_mechanism(spec);
    Outcome out = mech->evaluate_intended(profile.bids);
    check_outcome_invariants(out, mech->block_size());
    return out;
}

Outcome shading_outcome(const ValuationProfile& values, int n, int k) {
    if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("expected one value per bidder");
    if (n < k) throw std::invalid_argument("need n >= k");
    if (k > kMaxVerifiedBlock)
        throw std::domain_error("equilibrium formula unverified for k > 10");
    for (const Rat& v : values.values)
        if (v < 0 || v > 1)
            throw std::invalid_argument("shading auction values must lie in [0,1]");

    std::vector<Rat> bids = values.values;  // truthful reports
    Outcome out;
    out.allocated = top_k_allocation(bids, BlockSize::Finite(k), 0);
    out.payments.assign(values.size(), 0);
    out.burns.assign(values.size(), 0);
    for (size_t i = 0; i < values.size(); ++i)
        if (out.allocated[i]) {
            const double s = shade_bid_uniform(n, k, to_double(values.values[i]));
            out.payments[i] = rat_from_double(s);
        }
    return out;
}

}  // namespace tfm
