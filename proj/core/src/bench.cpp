#include "mixflow/bench.hpp"

#include <chrono>
#include <random>

namespace mixflow::bench {

MixerSetup mixer_setup_from_string(const std::string& s) {
    if (s == "m1") return MixerSetup::M1;
    if (s == "m2") return MixerSetup::M2;
    if (s == "arbitrary" || s == "arb") return MixerSetup::Arbitrary;
    throw ParseError("unknown mixer setup '" + s + "'");
}

std::string to_string(MixerSetup setup) {
    switch (setup) {
        case MixerSetup::M1: return "m1";
        case MixerSetup::M2: return "m2";
        case MixerSetup::Arbitrary: return "arbitrary";
    }
    return "unknown";
}

const BenchLine* AssayBenchResult::find(const std::string& label) const {
    for (const auto& line : lines) {
        if (line.label == label) return &line;
    }
    return nullptr;
}

namespace {

struct PublishedRow {
    const char* label;
    std::int64_t reagent;
    std::int64_t buffer;
};

std::vector<PublishedRow> published_rows(const std::string& assay) {
    if (assay == "cca") {
        return {{"published minimal", 60, 190}, {"published nfb m1", 125, 300},
                {"published nfb m2", 250, 600}, {"published opt m1", 75, 225},
                {"published opt m2", 100, 300}, {"published opt arbitrary", 60, 200}};
    }
    if (assay == "paa") {
        return {{"published minimal", 30, 470}, {"published nfb m1", 250, 1050},
                {"published nfb m2", 500, 2100}, {"published opt m1", 100, 650},
                {"published opt m2", 100, 900}, {"published opt arbitrary", 30, 500}};
    }
    return {};
}

void append_published(AssayBenchResult& result, const std::string& assay) {
    for (const auto& row : published_rows(assay)) {
        result.lines.push_back({row.label, Rational(row.reagent), Rational(row.buffer),
                                "published"});
    }
}

} // namespace

AssayBenchResult run_assay(const fixtures::AssayCase& assay, MixerSetup setup,
                           TreeAlgorithm algorithm) {
    AssayBenchResult result;
    result.assay = assay.name;
    result.setup = setup;

    for (const auto& share : assay.shares) {
        result.approximated.push_back(approximate_ratio(share, assay.precision));
    }

    // minimal requirement over the approximated ratios: share times output,
    // summed across samples
    Rational minimal_r, minimal_b;
    for (const auto& ratio : result.approximated) {
        minimal_r += ratio.share_a() * assay.output_volume;
        minimal_b += (Rational(1) - ratio.share_a()) * assay.output_volume;
    }
    result.lines.push_back({"minimal", minimal_r, minimal_b, "derived"});

    if (setup == MixerSetup::Arbitrary) {
        ArchitectureSpec arch;
        arch.unit = "ul";
        arch.htr = Volume(assay.arbitrary_htr);
        arch.mixer_technology = MixerTechnology::ArbitraryRatio;
        Rational mhc = assay.output_volume * Rational(2);
        arch.ffu_classes = {{"mixer", Volume(mhc), Volume(Rational(0)), 1}};

        Rational total_r, total_b;
        Rational worst_dev;
        for (const auto& ratio : result.approximated) {
            MixTarget target{assay.reagent, assay.buffer, ratio.share_a(),
                             Volume(assay.output_volume)};
            ArbitraryAssignment one = assign_arbitrary(target, arch, arch.ffu_classes[0],
                                                       assay.arbitrary_epsilon);
            total_r += one.vol_a.amount();
            total_b += one.vol_b.amount();
            worst_dev = std::max(worst_dev, one.deviation);
        }
        result.lines.push_back({"opt arbitrary", total_r, total_b, "derived"});
        append_published(result, assay.name);
        return result;
    }

    // fixed 1:1 mixers: M1 holds the sample output, M2 twice that, so a
    // chamber unit is half of the mixer and the root delivers two units (M1)
    // or one unit (M2) per sample
    Rational chamber = setup == MixerSetup::M1 ? assay.output_volume * Rational(1, 2)
                                               : assay.output_volume;
    int units_out = setup == MixerSetup::M1 ? 2 : 1;

    std::vector<TreeSetTarget> targets;
    for (std::size_t i = 0; i < result.approximated.size(); ++i) {
        targets.push_back({assay.name + "_s" + std::to_string(i + 1), result.approximated[i],
                           units_out});
    }

    int depth = 1;
    for (const auto& ratio : result.approximated) depth = std::max(depth, ratio.depth);
    depth = std::max(depth, assay.precision);

    std::string suffix = setup == MixerSetup::M1 ? " m1" : " m2";
    if (algorithm == TreeAlgorithm::MinMix) {
        Rational unopt_r, unopt_b, opt_r, opt_b;
        for (const auto& t : targets) {
            MixingTree tree = min_mix_tree(t.ratio, t.units_out);
            unopt_r += Rational(tree.leaf_units_a) * chamber;
            unopt_b += Rational(tree.leaf_units_b) * chamber;
        }
        result.lines.push_back({"minmix" + suffix, unopt_r, unopt_b, "derived"});
        append_published(result, assay.name);
        return result;
    }

    bool pruned = algorithm == TreeAlgorithm::Pruned4;
    NetworkGraph net = build_network(depth, pruned);
    SearchMode mode = pruned ? SearchMode::Pruned4 : SearchMode::Exact;

    TreeSetPlan unopt = plan_tree_set_solo(targets, net, mode);
    TreeSetPlan opt = select_tree_variants(targets, net, mode);

    result.lines.push_back({"nfb" + suffix, Rational(unopt.units_a) * chamber,
                            Rational(unopt.units_b) * chamber, "derived"});
    result.lines.push_back({"opt" + suffix, Rational(opt.units_a) * chamber,
                            Rational(opt.units_b) * chamber, "derived"});
    append_published(result, assay.name);
    return result;
}

AssayBenchResult run_glucose_trees(TreeAlgorithm algorithm) {
    AssayBenchResult result;
    result.assay = "glucose";
    result.setup = MixerSetup::M1;

    auto targets = fixtures::glucose_tree_targets();
    for (const auto& t : targets) result.approximated.push_back(t.ratio);

    bool pruned = algorithm != TreeAlgorithm::Exact;
    NetworkGraph net = build_network(4, pruned);
    SearchMode mode = pruned ? SearchMode::Pruned4 : SearchMode::Exact;

    TreeSetPlan unopt = plan_tree_set_solo(targets, net, mode);
    TreeSetPlan opt = select_tree_variants(targets, net, mode);

    result.lines.push_back({"nfb units", Rational(unopt.units_a), Rational(unopt.units_b),
                            "derived"});
    result.lines.push_back({"opt units", Rational(opt.units_a), Rational(opt.units_b),
                            "derived"});
    result.lines.push_back({"published nfb units", Rational(4), Rational(9), "published"});
    result.lines.push_back({"published opt units", Rational(2), Rational(6), "published"});
    return result;
}

std::vector<CompareRow> compare_algorithms(std::uint64_t seed, int count, int depth,
                                           const SearchOptions& options) {
    std::mt19937_64 rng(seed);
    NetworkGraph exact_net = build_network(depth, false);
    NetworkGraph pruned_net = build_network(depth, true);

    auto timed = [](auto&& fn) {
        auto start = std::chrono::steady_clock::now();
        auto value = fn();
        auto stop = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        return std::pair{value, ms};
    };

    std::vector<CompareRow> rows;
    for (int i = 0; i < count; ++i) {
        std::int64_t denom = std::int64_t(1) << depth;
        std::int64_t k = 2 * std::uniform_int_distribution<std::int64_t>(0, denom / 2 - 1)(rng) + 1;
        ApproxRatio target{k, denom - k, depth, Rational(0)};

        CompareRow row;
        row.target = target;

        auto [mm, mm_ms] = timed([&] { return min_mix_tree(target, 2); });
        row.cost_minmix = mm.fluid_cost();
        row.ops_minmix = mm.op_count();
        row.ms_minmix = mm_ms;

        SearchStats exact_stats, pruned_stats;
        auto [ex, ex_ms] = timed([&] {
            return nfb_best_tree(exact_net, target, 2, SearchMode::Exact, {}, options,
                                 &exact_stats);
        });
        row.cost_exact = ex.fluid_cost();
        row.ops_exact = ex.op_count();
        row.ms_exact = ex_ms;

        auto [p4, p4_ms] = timed([&] {
            return nfb_best_tree(pruned_net, target, 2, SearchMode::Pruned4, {}, options,
                                 &pruned_stats);
        });
        row.cost_pruned4 = p4.fluid_cost();
        row.ops_pruned4 = p4.op_count();
        row.ms_pruned4 = p4_ms;

        row.budget_exhausted = exact_stats.budget_exhausted || pruned_stats.budget_exhausted;
        row.ordering_ok = row.budget_exhausted ||
                          (row.cost_exact <= row.cost_pruned4 &&
                           row.cost_exact <= row.cost_minmix);
        rows.push_back(row);
    }
    return rows;
}

} // namespace mixflow::bench
