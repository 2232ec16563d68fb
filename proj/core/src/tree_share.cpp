#include "mixflow/tree_share.hpp"

#include <algorithm>
#include <map>

namespace mixflow {

namespace {

struct VertexChoice {
    std::vector<MixStep> pairs; // ascending delta
};

// group a tree's steps per output concentration, nearest parents first
std::map<Rational, VertexChoice> choices_of(const MixingTree& tree) {
    std::map<Rational, VertexChoice> out;
    for (const auto& s : tree.steps) out[s.conc].pairs.push_back(s);
    for (auto& [conc, choice] : out) {
        std::sort(choice.pairs.begin(), choice.pairs.end(),
                  [&](const MixStep& a, const MixStep& b) {
                      Rational da = a.conc - a.parent_lo;
                      Rational db = b.conc - b.parent_lo;
                      if (da != db) return da < db;
                      return a.parent_lo < b.parent_lo;
                  });
    }
    return out;
}

} // namespace

MixingTree apply_pool_to_tree(const MixingTree& solo, UnitPool& pool) {
    auto choices = choices_of(solo);

    MixingTree tree;
    tree.target = solo.target;
    tree.units_out = solo.units_out;

    std::map<Rational, std::int64_t> demands;
    demands[solo.target] = solo.units_out;

    while (!demands.empty()) {
        // deepest concentration first, ties ascending
        auto chosen = demands.begin();
        int chosen_level = NetworkGraph::level_of(chosen->first);
        for (auto it = std::next(demands.begin()); it != demands.end(); ++it) {
            int level = NetworkGraph::level_of(it->first);
            if (level > chosen_level) {
                chosen = it;
                chosen_level = level;
            }
        }
        Rational vertex = chosen->first;
        std::int64_t units = chosen->second;
        demands.erase(chosen);

        if (chosen_level == 0) {
            std::int64_t from_pool = std::min(pool.available(vertex), units);
            if (from_pool > 0) {
                pool.take(vertex, from_pool);
                tree.pool_taken[vertex] += from_pool;
            }
            std::int64_t fresh = units - from_pool;
            if (vertex == Rational(1)) tree.leaf_units_a += fresh;
            else tree.leaf_units_b += fresh;
            continue;
        }

        std::int64_t from_pool = std::min(pool.available(vertex), units);
        if (from_pool > 0) {
            pool.take(vertex, from_pool);
            tree.pool_taken[vertex] += from_pool;
        }
        std::int64_t open = units - from_pool;
        if (open == 0) continue;

        std::int64_t events = (open + 1) / 2;
        std::int64_t extra = 2 * events - open;
        if (vertex == solo.target) tree.surplus += extra;
        else if (extra > 0) tree.waste[vertex] += extra;

        auto it = choices.find(vertex);
        if (it == choices.end()) {
            throw std::logic_error("tree lacks a parent choice for " + vertex.str());
        }
        for (const auto& step : it->second.pairs) {
            if (events == 0) break;
            std::int64_t count = std::min<std::int64_t>(events, step.count);
            tree.steps.push_back({vertex, chosen_level, step.parent_lo, step.parent_hi,
                                  int(count)});
            demands[step.parent_lo] += count;
            demands[step.parent_hi] += count;
            events -= count;
        }
        if (events != 0) {
            throw std::logic_error("tree has too few events for " + vertex.str());
        }
    }

    std::sort(tree.steps.begin(), tree.steps.end(), [](const MixStep& a, const MixStep& b) {
        if (a.level != b.level) return a.level > b.level;
        if (a.conc != b.conc) return a.conc < b.conc;
        return a.parent_lo < b.parent_lo;
    });

    // everything this tree leaves behind feeds the trees after it
    for (const auto& [conc, units] : tree.waste) pool.add(conc, units);
    if (tree.surplus > 0) pool.add(tree.target, tree.surplus);
    return tree;
}

namespace {

struct BeamState {
    UnitPool pool;
    std::vector<MixingTree> trees;
    std::int64_t units_a = 0;
    std::int64_t units_b = 0;
    std::int64_t ops = 0;
    std::string signature;

    std::int64_t total() const { return units_a + units_b; }
};

TreeSetPlan plan_from(BeamState&& state) {
    TreeSetPlan plan;
    plan.trees = std::move(state.trees);
    plan.units_a = state.units_a;
    plan.units_b = state.units_b;
    plan.ops = state.ops;
    plan.leftovers = std::move(state.pool);
    return plan;
}

} // namespace

TreeSetPlan plan_tree_set_solo(const std::vector<TreeSetTarget>& targets,
                               const NetworkGraph& net, SearchMode mode,
                               const SearchOptions& options) {
    TreeSetPlan plan;
    for (const auto& t : targets) {
        MixingTree tree = nfb_best_tree(net, t.ratio, t.units_out, mode, {}, options);
        plan.units_a += tree.leaf_units_a;
        plan.units_b += tree.leaf_units_b;
        plan.ops += tree.op_count();
        for (const auto& [conc, units] : tree.waste) plan.leftovers.add(conc, units);
        if (tree.surplus > 0) plan.leftovers.add(tree.target, tree.surplus);
        plan.trees.push_back(std::move(tree));
    }
    return plan;
}

TreeSetPlan select_tree_variants(const std::vector<TreeSetTarget>& targets,
                                 const NetworkGraph& net, SearchMode mode, std::size_t beam,
                                 bool exhaustive, const SearchOptions& options) {
    std::vector<BeamState> states(1);

    for (const auto& target : targets) {
        auto variants = nfb_search(net, target.ratio, target.units_out, mode, {}, options);
        if (variants.empty()) {
            throw UnreachableError("no mixing tree for " + target.ratio.ratio_str());
        }

        std::vector<BeamState> next;
        for (const auto& state : states) {
            for (const auto& variant : variants) {
                BeamState ns = state;
                MixingTree tree = apply_pool_to_tree(variant, ns.pool);
                ns.units_a += tree.leaf_units_a;
                ns.units_b += tree.leaf_units_b;
                ns.ops += tree.op_count();
                ns.signature += tree.encode() + "#";
                ns.trees.push_back(std::move(tree));
                next.push_back(std::move(ns));
            }
        }
        std::sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
            if (a.total() != b.total()) return a.total() < b.total();
            if (a.ops != b.ops) return a.ops < b.ops;
            return a.signature < b.signature;
        });
        next.erase(std::unique(next.begin(), next.end(),
                               [](const BeamState& a, const BeamState& b) {
                                   return a.signature == b.signature;
                               }),
                   next.end());
        if (!exhaustive && next.size() > beam) next.resize(beam);
        states = std::move(next);
    }

    return plan_from(std::move(states.front()));
}

} // namespace mixflow
