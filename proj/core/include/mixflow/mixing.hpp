#pragma once

#include "mixflow/architecture.hpp"

#include <map>
#include <string>
#include <vector>

namespace mixflow {

struct InvalidRatioError : std::runtime_error {
    explicit InvalidRatioError(const std::string& what) : std::runtime_error(what) {}
};

// A two-reagent mixing goal at the application level.
struct MixTarget {
    std::string reagent_a;
    std::string reagent_b;
    Rational share_a;       // in (0,1); share_b = 1 - share_a
    Volume required_output;
};

// Reduced dyadic approximation numer_a : numer_b of a target share, with
// numer_a + numer_b = 2^depth and both numerators odd for depth >= 1.
struct ApproxRatio {
    std::int64_t numer_a = 1;
    std::int64_t numer_b = 1;
    int depth = 1;
    Rational error; // |numer_a/2^depth - requested share_a|

    Rational share_a() const { return Rational(numer_a, numer_a + numer_b); }
    std::string ratio_str() const {
        return std::to_string(numer_a) + ":" + std::to_string(numer_b);
    }
    bool operator==(const ApproxRatio& rhs) const {
        return numer_a == rhs.numer_a && numer_b == rhs.numer_b;
    }
};

// Best k/2^d' with d' <= precision minimizing |k/2^d' - share_a|; ties go to
// the shallower depth, then the smaller numerator.
ApproxRatio approximate_ratio(const Rational& share_a, int precision);

// One 1:1 mixing step at unit granularity: `count` identical events, each
// consuming one unit of either parent and producing two units of `conc`.
struct MixStep {
    Rational conc;
    int level = 0;
    Rational parent_lo;
    Rational parent_hi;
    int count = 1;
};

// Unit-level mixing tree. Concentrations are shares of reagent A; one unit is
// one mixer chamber. Conservation holds at every step: each event turns
// 1 + 1 parent units into 2 output units.
struct MixingTree {
    Rational target;
    int units_out = 0;
    std::vector<MixStep> steps;                 // deepest level first
    std::int64_t leaf_units_a = 0;              // fresh pure input drawn
    std::int64_t leaf_units_b = 0;
    std::map<Rational, std::int64_t> pool_taken; // units satisfied from leftovers
    std::map<Rational, std::int64_t> waste;      // intermediate leftover units
    std::int64_t surplus = 0;                    // target-ratio units beyond units_out

    std::int64_t fluid_cost() const { return leaf_units_a + leaf_units_b; }
    std::int64_t op_count() const;

    // Canonical text form; used for deterministic ordering and deduping.
    std::string encode() const;

    std::string to_dot(const std::string& reagent_a = "A",
                       const std::string& reagent_b = "B") const;
};

// Left-deep Min-Mix chain for a reduced ratio: exactly `depth` steps, leaf
// pattern given by the binary digits of the two numerators.
MixingTree min_mix_tree(const ApproxRatio& ratio, int units_out);

struct TreeMetrics {
    std::int64_t fluid_cost = 0;
    std::int64_t op_count = 0;
    std::map<Rational, std::int64_t> waste_profile; // intermediate waste only
    std::int64_t surplus = 0;
};

TreeMetrics tree_metrics(const MixingTree& tree);

// Sanity checks used by tests and by the search itself: unit conservation at
// every step and root concentration equal to the target.
bool tree_is_consistent(const MixingTree& tree, std::string* why = nullptr);

} // namespace mixflow
