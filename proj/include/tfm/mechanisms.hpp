#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tfm/core.hpp"

namespace tfm {

enum class Variant {
    GTA,                 // posted price 1, infinite block, discrete bids
    PABGA,               // pay-as-bid greedy, block k
    UPGA,                // uniform (k+1)-th price, block k, reserve r
    Shading,             // direct revelation of the PABGA under UNI(0,1)
    WellReserved,        // UPGA(k, r) payments, burns r per allocated bid
    SupplyLimitedPABGA,  // PABGA restricted to limit k' <= k
    MyersonUniform,      // UPGA with reserve (default 1/2), zero burn
};

enum class BidSpace { Discrete, Continuous };

struct MechanismSpec {
    Variant variant = Variant::PABGA;
    BlockSize block = BlockSize::Finite(1);
    Rat reserve = 0;
    int limit = 0;        // SupplyLimitedPABGA
    int shading_n = 0;    // Shading: number of bidders the equilibrium assumes
    BidSpace bid_space = BidSpace::Continuous;
    Rat step = 1;         // grid step for Discrete specs

    static MechanismSpec Gta();
    static MechanismSpec Pabga(int k);
    static MechanismSpec Upga(int k, Rat reserve = 0);
    static MechanismSpec ShadingAuction(int n, int k);
    static MechanismSpec WellReservedTfm(int k, Rat reserve);
    static MechanismSpec SupplyLimited(int k, int limit);
    static MechanismSpec Myerson(int k, Rat reserve = rat(1, 2));

    std::string name() const;
};

// Intended rules plus the payment/burn semantics under an arbitrary
// miner-chosen allocation, which the incentive checkers enumerate over.
class Mechanism {
  public:
    virtual ~Mechanism() = default;

    virtual BlockSize block_size() const = 0;
    virtual Rat reserve() const { return 0; }

    virtual std::vector<int> intended_allocation(const std::vector<Rat>& bids) const = 0;
    virtual std::vector<Rat> payments(const std::vector<Rat>& bids,
                                      const std::vector<int>& alloc) const = 0;
    virtual std::vector<Rat> burns(const std::vector<Rat>& bids,
                                   const std::vector<int>& alloc,
                                   const std::vector<Rat>& payments) const = 0;

    // A miner may pick any allocation within the block cap that respects the
    // reserve and does not overcharge an included bid.
    bool allocation_feasible(const std::vector<Rat>& bids,
                             const std::vector<int>& alloc) const;

    Outcome evaluate(const std::vector<Rat>& bids, const std::vector<int>& alloc) const;
    Outcome evaluate_intended(const std::vector<Rat>& bids) const;
};

std::unique_ptr<Mechanism> make_mechanism(const MechanismSpec& spec);

// Intended outcome per the spec's rules; validates outcome invariants and
// the discrete grid when the spec declares one.
Outcome run_mechanism(const MechanismSpec& spec, const BidProfile& profile);

// Shading auction under UNI(0,1): allocates the k highest values, winners pay
// their equilibrium bid s(v). Payments are the exact rational images of the
// double-precision s(v).
Outcome shading_outcome(const ValuationProfile& values, int n, int k);

}  // namespace tfm
