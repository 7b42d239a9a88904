#include "tfm/core.hpp"

#include <algorithm>
#include <numeric>

namespace tfm {

void check_outcome_invariants(const Outcome& outcome, BlockSize block) {
    const size_t n = outcome.allocated.size();
    if (outcome.payments.size() != n || outcome.burns.size() != n)
        throw std::logic_error("outcome sequences differ in length");
    int count = 0;
    for (size_t i = 0; i < n; ++i) {
        if (outcome.allocated[i] != 0 && outcome.allocated[i] != 1)
            throw std::logic_error("allocation flag must be 0 or 1");
        count += outcome.allocated[i];
        if (outcome.allocated[i] == 0 && outcome.payments[i] != 0)
            throw std::logic_error("unallocated bid with nonzero payment");
        if (outcome.payments[i] < 0 || outcome.burns[i] < 0)
            throw std::logic_error("negative payment or burn");
        if (outcome.burns[i] > outcome.payments[i])
            throw std::logic_error("burn exceeds payment");
    }
    if (block.finite && count > block.k)
        throw std::logic_error("allocation exceeds block size");
}

std::vector<int> top_k_allocation(const std::vector<Rat>& bids, BlockSize block,
                                  const Rat& reserve) {
    const int n = static_cast<int>(bids.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return bids[a] > bids[b]; });
    std::vector<int> alloc(n, 0);
    int taken = 0;
    const int cap = block.cap(n);
    for (int idx : order) {
        if (taken >= cap) break;
        if (bids[idx] < reserve) break;  // sorted, so the rest are lower too
        alloc[idx] = 1;
        ++taken;
    }
    return alloc;
}

Rat user_utility(const Outcome& outcome, const Rat& value, size_t i) {
    if (i >= outcome.size()) throw std::out_of_range("bidder index out of range");
    return value * outcome.allocated[i] - outcome.payments[i];
}

Rat miner_utility(const Outcome& outcome, const BidProfile& profile) {
    if (outcome.size() != profile.size())
        throw std::invalid_argument("outcome/profile size mismatch");
    Rat u = 0;
    for (size_t i = 0; i < outcome.size(); ++i) {
        if (!outcome.allocated[i]) continue;
        if (static_cast<int>(i) < profile.real_count)
            u += outcome.payments[i] - outcome.burns[i];
        else
            u -= outcome.burns[i];
    }
    return u;
}

Rat joint_utility(const Outcome& outcome, const std::vector<int>& coalition,
                  const ValuationProfile& values, const BidProfile& profile) {
    Rat u = miner_utility(outcome, profile);
    for (int i : coalition) {
        if (i < 0 || i >= profile.real_count)
            throw std::invalid_argument("coalition member is not a real bidder");
        u += user_utility(outcome, values.values.at(i), static_cast<size_t>(i));
    }
    return u;
}

}  // namespace tfm
