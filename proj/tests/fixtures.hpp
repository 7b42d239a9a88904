#pragma once

// Deliberately broken mechanisms used to exercise the checkers. Each violates
// exactly one hygiene property so a clean pass on the others doubles as a
// soundness test of the violation search.

#include "tfm/mechanisms.hpp"

namespace tfm::fixtures {

// Pay-as-bid plus a unit surcharge: violates EPIR on every allocated bid.
class Overcharge final : public Mechanism {
  public:
    explicit Overcharge(int k) : block_(BlockSize::Finite(k)) {}
    BlockSize block_size() const override { return block_; }
    std::vector<int> intended_allocation(const std::vector<Rat>& bids) const override {
        return top_k_allocation(bids, block_, 0);
    }
    std::vector<Rat> payments(const std::vector<Rat>& bids,
                              const std::vector<int>& alloc) const override {
        std::vector<Rat> pay(bids.size(), 0);
        for (size_t i = 0; i < bids.size(); ++i)
            if (alloc[i]) pay[i] = bids[i] + 1;
        return pay;
    }
    std::vector<Rat> burns(const std::vector<Rat>& bids, const std::vector<int>&,
                           const std::vector<Rat>&) const override {
        return std::vector<Rat>(bids.size(), 0);
    }

  private:
    BlockSize block_;
};

// Pay-as-bid but burns twice the payment: violates EPBB on any positive bid.
class Overburn final : public Mechanism {
  public:
    explicit Overburn(int k) : block_(BlockSize::Finite(k)) {}
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
                           const std::vector<Rat>& pay) const override {
        std::vector<Rat> burn(bids.size(), 0);
        for (size_t i = 0; i < bids.size(); ++i) burn[i] = pay[i] * 2;
        return burn;
    }

  private:
    BlockSize block_;
};

// Pay-as-bid with the full payment burned: the total burn depends on the bid
// values rather than the allocated count, so the size-based-burn structure
// fails while EPIR/EPBB still hold.
class ValueDependentBurn final : public Mechanism {
  public:
    explicit ValueDependentBurn(int k) : block_(BlockSize::Finite(k)) {}
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
    std::vector<Rat> burns(const std::vector<Rat>&, const std::vector<int>&,
                           const std::vector<Rat>& pay) const override {
        return pay;
    }

  private:
    BlockSize block_;
};

}  // namespace tfm::fixtures
