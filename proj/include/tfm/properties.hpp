#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfm/core.hpp"
#include "tfm/mechanisms.hpp"

namespace tfm {

enum class Property {
    EPIR,
    EPBB,
    DSIC,
    MMIC,
    OCA,
    SCP,
    SEPARABLE,
    OCA_STRUCTURE,
    REV_BOUND,
};

enum class Verdict {
    HoldsOnGrid,       // exhaustive sweep completed without a violation
    Violated,          // counterexample attached
    NoViolationFound,  // randomized search only; weaker than HoldsOnGrid
};

std::string to_string(Property p);
std::string to_string(Verdict v);

struct CheckConfig {
    int n = 3;                             // real bidders
    int grid_max = 3;                      // grid = {0, step, ..., grid_max}
    Rat step = 1;
    int max_fake = 2;                      // fake bids the miner may inject
    std::optional<int> coalition_bound;    // nullopt = All
    long long budget = 50'000'000;         // mechanism evaluations before
                                           // falling back to randomized search
    unsigned long long seed = 0;
    long long random_trials = 200'000;

    std::vector<Rat> grid_points() const;
    int coalition_cap() const { return coalition_bound.value_or(n); }
};

// A violation transcript; replayable through the core utilities with exact
// rational arithmetic.
struct Counterexample {
    std::vector<Rat> values;          // real bidders' valuations (if relevant)
    std::vector<Rat> honest_bids;     // real bidders, truthful baseline
    std::vector<Rat> deviation_bids;  // real bidders' bids after deviating
    std::vector<Rat> fake_bids;       // miner-injected bids
    std::vector<int> miner_allocation;  // over deviation_bids + fake_bids
    std::vector<int> coalition;         // deviating real bidders
    Rat baseline_utility = 0;
    Rat deviation_utility = 0;
    std::string note;
};

struct PropertyReport {
    Property property;
    Verdict verdict = Verdict::HoldsOnGrid;
    std::optional<Counterexample> counterexample;
    std::vector<std::string> notes;
    long long evaluations = 0;

    bool holds() const { return verdict != Verdict::Violated; }
    std::string summary() const;
};

PropertyReport check_epir(const Mechanism& mech, const CheckConfig& cfg);
PropertyReport check_epbb(const Mechanism& mech, const CheckConfig& cfg);
PropertyReport check_dsic(const Mechanism& mech, const CheckConfig& cfg);
PropertyReport check_mmic(const Mechanism& mech, const CheckConfig& cfg);
PropertyReport check_oca(const Mechanism& mech, const CheckConfig& cfg);
PropertyReport check_scp(const Mechanism& mech, const CheckConfig& cfg);
PropertyReport check_separable(const Mechanism& mech, const CheckConfig& cfg);

// Structural validation against the OCA-proof form: size-based monotone burn,
// top-k allocation, and joint-utility-maximizing allocated count.
PropertyReport validate_oca_structure(const Mechanism& mech, const CheckConfig& cfg);

// Revenue auditors for Discrete(1) mechanisms: revenue <= 5k always, and
// revenue <= k when the payment and burn rules are separable on the grid.
PropertyReport audit_revenue_bound(const Mechanism& mech, const CheckConfig& cfg);

// Recomputes baseline and deviation utilities of a transcript through the
// core utility functions. Both must reproduce exactly.
struct ReplayResult {
    Rat baseline_utility;
    Rat deviation_utility;
};
ReplayResult replay_counterexample(const Mechanism& mech, Property property,
                                   const Counterexample& cx);

PropertyReport run_check(const Mechanism& mech, Property property,
                         const CheckConfig& cfg);

}  // namespace tfm
