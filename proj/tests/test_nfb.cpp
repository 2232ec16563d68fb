#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mixflow/nfb.hpp"
#include "mixflow/oracle.hpp"
#include "mixflow/tree_share.hpp"

using namespace mixflow;

namespace {

ApproxRatio ratio(std::int64_t a, std::int64_t b) {
    int depth = 0;
    while ((std::int64_t(1) << depth) < a + b) ++depth;
    return ApproxRatio{a, b, depth, Rational(0)};
}

} // namespace

TEST_CASE("1:1 with two units out costs two units in one operation") {
    NetworkGraph net = build_network(4);
    auto trees = nfb_search(net, ratio(1, 1), 2, SearchMode::Exact);
    REQUIRE(trees.size() == 1);
    CHECK(trees[0].fluid_cost() == 2);
    CHECK(trees[0].op_count() == 1);
    CHECK(trees[0].leaf_units_a == 1);
    CHECK(trees[0].leaf_units_b == 1);
    CHECK(trees[0].waste.empty());
    CHECK(trees[0].surplus == 0);
}

TEST_CASE("3:13 has exactly two minimum-cost trees with different leftovers") {
    NetworkGraph net = build_network(4);
    auto trees = nfb_search(net, ratio(3, 13), 2, SearchMode::Exact);
    REQUIRE(trees.size() == 2);

    for (const auto& t : trees) {
        CHECK(t.fluid_cost() == 4);
        CHECK(t.leaf_units_a == 1);
        CHECK(t.leaf_units_b == 3);
        std::string why;
        CHECK_MESSAGE(tree_is_consistent(t, &why), why);
    }

    // one tree leaves 1:3 and 3:5 behind, the other 1:1 and 1:7
    std::map<Rational, std::int64_t> first{{Rational(1, 4), 1}, {Rational(3, 8), 1}};
    std::map<Rational, std::int64_t> second{{Rational(1, 2), 1}, {Rational(1, 8), 1}};
    bool has_first = trees[0].waste == first || trees[1].waste == first;
    bool has_second = trees[0].waste == second || trees[1].waste == second;
    CHECK(has_first);
    CHECK(has_second);
}

TEST_CASE("5:11 exact search beats the min-mix chain") {
    NetworkGraph net = build_network(4);
    MixingTree best = nfb_best_tree(net, ratio(5, 11), 2, SearchMode::Exact);
    CHECK(best.fluid_cost() == 3);
    CHECK(best.leaf_units_a == 1);
    CHECK(best.leaf_units_b == 2);
    CHECK(best.waste.size() == 1);
    CHECK(best.waste.count(Rational(3, 8)) == 1);

    MixingTree chain = min_mix_tree(ratio(5, 11), 2);
    CHECK(best.fluid_cost() < chain.fluid_cost());
}

TEST_CASE("1:7 exact tree") {
    NetworkGraph net = build_network(4);
    MixingTree best = nfb_best_tree(net, ratio(1, 7), 2, SearchMode::Exact);
    CHECK(best.fluid_cost() == 4);
    CHECK(best.leaf_units_a == 1);
    CHECK(best.leaf_units_b == 3);
    CHECK(best.waste.at(Rational(1, 2)) == 1);
    CHECK(best.waste.at(Rational(1, 4)) == 1);
}

TEST_CASE("search equals the exhaustive flow oracle on small instances") {
    for (int depth = 1; depth <= 4; ++depth) {
        NetworkGraph net = build_network(depth);
        std::int64_t denom = std::int64_t(1) << depth;
        int max_units = depth <= 3 ? 3 : 2; // three units exercises multi-event roots
        for (std::int64_t k = 1; k < denom; k += 2) {
            ApproxRatio target = ratio(k, denom - k);
            for (int units = 1; units <= max_units; ++units) {
                MixingTree best = nfb_best_tree(net, target, units, SearchMode::Exact);
                std::int64_t want = oracle::min_flow_cost(target, units, depth);
                CHECK_MESSAGE(best.fluid_cost() == want,
                              target.ratio_str(), " units ", units, ": got ",
                              best.fluid_cost(), " want ", want);
            }
        }
    }
    // a deeper spot check with an uneven delivery
    NetworkGraph net = build_network(4);
    MixingTree best = nfb_best_tree(net, ratio(5, 11), 3, SearchMode::Exact);
    CHECK(best.fluid_cost() == oracle::min_flow_cost(ratio(5, 11), 3, 4));
}

TEST_CASE("exact is never beaten by pruned4 or min-mix up to depth 4") {
    for (int depth = 1; depth <= 4; ++depth) {
    NetworkGraph exact_net = build_network(depth);
    NetworkGraph pruned_net = build_network(depth, true);
    std::int64_t denom = std::int64_t(1) << depth;
    for (std::int64_t k = 1; k < denom; k += 2) {
        ApproxRatio target = ratio(k, denom - k);
        for (int units = 1; units <= 2; ++units) {
            std::int64_t exact = nfb_best_tree(exact_net, target, units, SearchMode::Exact)
                                     .fluid_cost();
            std::int64_t pruned =
                nfb_best_tree(pruned_net, target, units, SearchMode::Pruned4).fluid_cost();
            std::int64_t chain = min_mix_tree(target, units).fluid_cost();
            CHECK(exact <= pruned);
            CHECK(exact <= chain);
            // no integer flow can beat the real-valued reagent demand
            CHECK(exact >= reagent_lower_bound(target, units));
        }
    }
    }
}

TEST_CASE("all minimum-cost solutions share cost and leaf multiset") {
    NetworkGraph net = build_network(4);
    for (std::int64_t k = 1; k < 16; k += 2) {
        ApproxRatio target = ratio(k, 16 - k);
        for (int units = 1; units <= 2; ++units) {
            auto trees = nfb_search(net, target, units, SearchMode::Exact);
            REQUIRE(!trees.empty());
            for (const auto& t : trees) {
                CHECK(t.fluid_cost() == trees[0].fluid_cost());
                CHECK(t.leaf_units_a == trees[0].leaf_units_a);
                CHECK(t.leaf_units_b == trees[0].leaf_units_b);
                CHECK(t.target == target.share_a());
                std::string why;
                CHECK_MESSAGE(tree_is_consistent(t, &why), why);
            }
        }
    }
}

TEST_CASE("unreachable targets are reported") {
    NetworkGraph net = build_network(4);
    CHECK_THROWS_AS(nfb_search(net, ratio(1, 31), 1, SearchMode::Exact), UnreachableError);
}

TEST_CASE("search budget exhaustion is flagged") {
    NetworkGraph net = build_network(4);
    SearchOptions options;
    options.budget = 2;
    SearchStats stats;
    nfb_search(net, ratio(3, 13), 2, SearchMode::Exact, {}, options, &stats);
    CHECK(stats.budget_exhausted);
    CHECK(stats.expanded >= 2);
}

TEST_CASE("per-reagent weights steer the objective") {
    NetworkGraph net = build_network(4);
    SearchOptions weighted;
    weighted.weight_a = Rational(10);
    // with reagent A ten times as expensive the optimum still needs one A unit
    MixingTree tree = nfb_best_tree(net, ratio(3, 13), 2, SearchMode::Exact, {}, weighted);
    CHECK(tree.leaf_units_a == 1);
    CHECK(tree.fluid_cost() == 4);
}

TEST_CASE("pool units replace fresh production") {
    NetworkGraph net = build_network(4);
    UnitPool pool;
    pool.add(Rational(1, 2), 1);

    // the 1:7 chain normally mixes 1:1 itself; with a leftover 1:1 unit in
    // the pool both pure draws for that step disappear
    MixingTree tree = nfb_best_tree(net, ratio(1, 7), 2, SearchMode::Exact, pool);
    CHECK(tree.fluid_cost() == 2);
    CHECK(tree.leaf_units_a == 0);
    CHECK(tree.leaf_units_b == 2);
    CHECK(tree.pool_taken.at(Rational(1, 2)) == 1);
    std::string why;
    CHECK_MESSAGE(tree_is_consistent(tree, &why), why);
}

TEST_CASE("pool units can satisfy the delivery itself") {
    NetworkGraph net = build_network(4);
    UnitPool pool;
    pool.add(Rational(3, 16), 2);
    MixingTree tree = nfb_best_tree(net, ratio(3, 13), 2, SearchMode::Exact, pool);
    CHECK(tree.fluid_cost() == 0);
    CHECK(tree.op_count() == 0);
    CHECK(tree.pool_taken.at(Rational(3, 16)) == 2);
}

TEST_CASE("applying a pool to a fixed tree drops satisfied subtrees") {
    NetworkGraph net = build_network(4);
    MixingTree solo = nfb_best_tree(net, ratio(1, 7), 2, SearchMode::Exact);
    CHECK(solo.fluid_cost() == 4);

    UnitPool pool;
    pool.add(Rational(1, 2), 1);
    MixingTree shared = apply_pool_to_tree(solo, pool);
    CHECK(shared.fluid_cost() == 2);
    CHECK(shared.leaf_units_b == 2);
    CHECK(shared.pool_taken.at(Rational(1, 2)) == 1);
    // the tree's own leftovers flow back into the pool
    CHECK(pool.available(Rational(1, 4)) == 1);
    std::string why;
    CHECK_MESSAGE(tree_is_consistent(shared, &why), why);
}

TEST_CASE("variant selection reuses leftovers across a tree set") {
    // four dilution targets; sharing drops consumption from (4,9) to (2,6)
    std::vector<TreeSetTarget> targets = {
        {"t11", ratio(1, 1), 1},
        {"t12", ratio(5, 11), 1},
        {"t14", ratio(3, 13), 1},
        {"t18", ratio(1, 7), 1},
    };
    NetworkGraph net = build_network(4);

    TreeSetPlan solo = plan_tree_set_solo(targets, net, SearchMode::Exact);
    CHECK(solo.units_a == 4);
    CHECK(solo.units_b == 9);

    // the 3:13 variant leaving 1:1 and 1:7 behind wins, and its 1:7 unit
    // then serves the 1:7 target directly: one unit below the (2,6) baseline
    TreeSetPlan shared = select_tree_variants(targets, net, SearchMode::Exact);
    CHECK(shared.units_a == 2);
    CHECK(shared.units_b == 5);
    CHECK(shared.units_a <= 2);
    CHECK(shared.units_b <= 6);
    CHECK(shared.total_units() < solo.total_units());
    REQUIRE(shared.trees.size() == 4);
    for (const auto& t : shared.trees) {
        std::string why;
        CHECK_MESSAGE(tree_is_consistent(t, &why), why);
    }
}

TEST_CASE("determinism: repeated searches return identical encodings") {
    NetworkGraph net = build_network(4);
    auto a = nfb_search(net, ratio(3, 13), 2, SearchMode::Exact);
    auto b = nfb_search(net, ratio(3, 13), 2, SearchMode::Exact);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].encode() == b[i].encode());
}
