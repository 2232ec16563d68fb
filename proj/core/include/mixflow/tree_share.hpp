#pragma once

#include "mixflow/nfb.hpp"

#include <string>
#include <vector>

namespace mixflow {

// One sample of a mixing-tree set: a target ratio plus the units its
// consumer takes from the root mix.
struct TreeSetTarget {
    std::string name;
    ApproxRatio ratio;
    int units_out = 1;
};

struct TreeSetPlan {
    std::vector<MixingTree> trees; // one per target, input order
    std::int64_t units_a = 0;      // fresh pure reagent consumption
    std::int64_t units_b = 0;
    std::int64_t ops = 0;
    UnitPool leftovers; // unconsumed waste and surplus after all trees

    std::int64_t total_units() const { return units_a + units_b; }
};

// Re-derives a tree with the same per-vertex parent choices, but satisfying
// demand from the pool first. Event counts can only shrink; freed subtrees
// vanish. The pool is updated in place: taken units leave, the tree's waste
// and surplus enter.
MixingTree apply_pool_to_tree(const MixingTree& solo, UnitPool& pool);

// Independent trees, no leftover sharing: the baseline consumption.
TreeSetPlan plan_tree_set_solo(const std::vector<TreeSetTarget>& targets,
                               const NetworkGraph& net, SearchMode mode,
                               const SearchOptions& options = {});

// Chooses among the equal-cost variants of every target the combination whose
// sequential leftover sharing consumes the least input fluid. Bounded beam
// (keep at most `beam` best partial combinations, most savings first);
// exhaustive mode keeps everything.
TreeSetPlan select_tree_variants(const std::vector<TreeSetTarget>& targets,
                                 const NetworkGraph& net, SearchMode mode,
                                 std::size_t beam = 32, bool exhaustive = false,
                                 const SearchOptions& options = {});

} // namespace mixflow
