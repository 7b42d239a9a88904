#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "tfm/rational.hpp"

namespace tfm {

// Block capacity: a positive integer or unlimited.
struct BlockSize {
    bool finite = true;
    int k = 1;

    static BlockSize Finite(int k) {
        if (k < 1) throw std::invalid_argument("block size must be >= 1");
        return BlockSize{true, k};
    }
    static BlockSize Infinite() { return BlockSize{false, 0}; }

    // Effective cap when n bids are pending; no bid beyond n can exist.
    int cap(int n) const { return finite ? (k < n ? k : n) : n; }

    bool operator==(const BlockSize&) const = default;
};

// Bid vector where the first real_count entries are real-user bids and the
// rest are miner-created fake bids.
struct BidProfile {
    std::vector<Rat> bids;
    int real_count = 0;

    BidProfile() = default;
    BidProfile(std::vector<Rat> b, int reals) : bids(std::move(b)), real_count(reals) {
        if (real_count < 0 || static_cast<size_t>(real_count) > bids.size())
            throw std::invalid_argument("real_count out of range");
        for (const Rat& bid : bids)
            if (bid < 0) throw std::invalid_argument("negative bid");
    }

    size_t size() const { return bids.size(); }
    int fake_count() const { return static_cast<int>(bids.size()) - real_count; }
};

// One valuation per real user.
struct ValuationProfile {
    std::vector<Rat> values;

    ValuationProfile() = default;
    explicit ValuationProfile(std::vector<Rat> v) : values(std::move(v)) {
        for (const Rat& x : values)
            if (x < 0) throw std::invalid_argument("negative valuation");
    }

    size_t size() const { return values.size(); }
};

// Per-bidder allocation, payment and burn for one round.
struct Outcome {
    std::vector<int> allocated;  // 0/1 flags
    std::vector<Rat> payments;
    std::vector<Rat> burns;

    size_t size() const { return allocated.size(); }
    int allocated_count() const {
        int c = 0;
        for (int a : allocated) c += a;
        return c;
    }
    Rat total_payment() const {
        Rat s = 0;
        for (const Rat& p : payments) s += p;
        return s;
    }
    Rat total_burn() const {
        Rat s = 0;
        for (const Rat& b : burns) s += b;
        return s;
    }
};

// Total burn as a function of allocated count; cardinal(0) = 0 and
// monotonically non-decreasing.
struct BurnSchedule {
    std::vector<Rat> cardinal;  // cardinal[j] = total burn with j allocated bids

    bool valid() const {
        if (cardinal.empty() || cardinal[0] != 0) return false;
        for (size_t j = 1; j < cardinal.size(); ++j)
            if (cardinal[j] < cardinal[j - 1]) return false;
        return true;
    }
    // cardinal(j) - cardinal(j-1)
    Rat burn_diff(size_t j) const { return cardinal.at(j) - cardinal.at(j - 1); }
};

// Structural per-bid invariants: consistent lengths, EPIR per-bid form,
// EPBB per-bid form and the block-size cap. Throws on violation.
void check_outcome_invariants(const Outcome& outcome, BlockSize block);

// Allocates the highest bids that are >= reserve, at most `block` of them.
// Ties broken by lowest index first.
std::vector<int> top_k_allocation(const std::vector<Rat>& bids, BlockSize block,
                                  const Rat& reserve);

// value * allocated[i] - payments[i]
Rat user_utility(const Outcome& outcome, const Rat& value, size_t i);

// Real allocated bids contribute payment - burn; an allocated fake bid costs
// the miner its burn (the payment returns to the miner, the burn does not).
Rat miner_utility(const Outcome& outcome, const BidProfile& profile);

// miner_utility plus the coalition members' user utilities. Side payments
// within the coalition net to zero and are not modeled.
Rat joint_utility(const Outcome& outcome, const std::vector<int>& coalition,
                  const ValuationProfile& values, const BidProfile& profile);

}  // namespace tfm
