#pragma once

#include "mixflow/mixing.hpp"
#include "mixflow/network.hpp"

#include <map>
#include <vector>

namespace mixflow {

struct UnreachableError : std::runtime_error {
    explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

enum class SearchMode { Exact, Pruned4 };

// Shared units of already-produced fluid, keyed by concentration. Demands
// satisfied from the pool cost nothing; the search always drains the pool
// before mixing fresh fluid.
struct UnitPool {
    std::map<Rational, std::int64_t> units;

    std::int64_t available(const Rational& conc) const {
        auto it = units.find(conc);
        return it == units.end() ? 0 : it->second;
    }
    void add(const Rational& conc, std::int64_t n) {
        if (n > 0) units[conc] += n;
    }
    void take(const Rational& conc, std::int64_t n);
    bool empty() const;
};

struct SearchOptions {
    std::int64_t budget = 10'000'000; // max expanded states
    Rational weight_a = Rational(1);  // per-unit cost of pure reagent A
    Rational weight_b = Rational(1);
};

struct SearchStats {
    std::int64_t expanded = 0;
    bool budget_exhausted = false;
};

// Branch-and-bound over integer unit flows: each mixing event consumes one
// unit from each of two parent concentrations and yields two units of their
// average; the root must supply units_out units of the target. Minimizes
// weighted pure input units and returns every solution achieving the minimum,
// ordered by op count then canonical encoding.
std::vector<MixingTree> nfb_search(const NetworkGraph& net, const ApproxRatio& target,
                                   int units_out, SearchMode mode,
                                   const UnitPool& pool = {},
                                   const SearchOptions& options = {},
                                   SearchStats* stats = nullptr);

// Convenience: best tree only.
MixingTree nfb_best_tree(const NetworkGraph& net, const ApproxRatio& target, int units_out,
                         SearchMode mode, const UnitPool& pool = {},
                         const SearchOptions& options = {}, SearchStats* stats = nullptr);

// ceil(units * share_a) + ceil(units * share_b): no integer flow can use
// fewer pure units than the real-valued reagent demand.
std::int64_t reagent_lower_bound(const ApproxRatio& target, int units_out);

} // namespace mixflow
