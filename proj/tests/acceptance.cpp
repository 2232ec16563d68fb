// Acceptance suite: one criterion per check, one pass/fail line each, with
// wall-clock budgets enforced. Exit status is the number of failed criteria.

#include "mixflow/bench.hpp"
#include "mixflow/generator.hpp"
#include "mixflow/json_io.hpp"
#include "mixflow/oracle.hpp"
#include "mixflow/pipeline.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace mixflow;

namespace {

struct Criterion {
    int number;
    std::string title;
    double budget_seconds;
    std::function<void(std::ostream&)> body; // throws on failure
};

struct Failure : std::runtime_error {
    explicit Failure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

template <typename T>
std::string str_of(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- criteria

void criterion_ratio_approximation(std::ostream& log) {
    auto expect = [&](Rational share, int precision, std::int64_t a, std::int64_t b) {
        ApproxRatio r = approximate_ratio(share, precision);
        require(r.numer_a == a && r.numer_b == b,
                "share " + share.str() + " -> " + r.ratio_str() + ", expected " +
                    std::to_string(a) + ":" + std::to_string(b));
    };
    expect(Rational(1, 3), 4, 5, 11); // 1:2 -> 5:11
    expect(Rational(1, 5), 4, 3, 13); // 1:4 -> 3:13
    expect(Rational(1, 9), 4, 1, 7);  // 1:8 -> 1:7

    auto cca = fixtures::cca();
    const char* expected[] = {"1:3", "1:15", "3:13", "5:11", "3:5"};
    for (std::size_t i = 0; i < cca.shares.size(); ++i) {
        ApproxRatio r = approximate_ratio(cca.shares[i], cca.precision);
        require(r.ratio_str() == expected[i],
                "cca sample " + std::to_string(i + 1) + " -> " + r.ratio_str());
    }
    log << "all five cca ratios and the three worked approximations exact";
}

void criterion_mvr(std::ostream& log) {
    auto app = fixtures::demo_application();
    auto arch = fixtures::demo_architecture();
    Mvr mvr = compute_mvr(app, app.require_node("o1"), arch);
    require(mvr.per_edge.at("in_a") == Volume(Rational(1)), "A side MVR != 1 nl");
    require(mvr.per_edge.at("in_b") == Volume(Rational(3)), "B side MVR != 3 nl");
    log << "mix(1/4, 3/4) at 1 nl HTR -> (1 nl, 3 nl)";
}

void criterion_assignment(std::ostream& log) {
    auto app = fixtures::demo_application();
    auto arch = fixtures::demo_architecture();

    ApplicationGraph bare = assign_bare_mvr(app, arch);
    auto shortage = underflow_report(bare);
    require(shortage.size() == 1 && shortage.count("o3") == 1,
            "bare MVR assignment should leave exactly the o3 shortage");
    require(shortage.at("o3") == Volume(Rational(2)), "shortage is not 2 nl");

    ApplicationGraph assigned = assign_volumes(app, arch);
    require(assigned.require_node("o3").scale_factor == 2, "o3 not scaled by two");
    require(assigned.require_node("o3").fva->at("in_b") == Volume(Rational(2)),
            "o3 input not 2 nl");
    require(underflow_report(assigned).empty(), "underflow left after assignment");
    log << "bare MVRs leave a 2 nl shortage; assignment scales the mix by two";
}

void criterion_glucose_lof(std::ostream& log) {
    OptimizeReport report =
        optimize(fixtures::glucose_application(), fixtures::glucose_architecture());
    require(report.diagnostics.empty(), "glucose fixture failed validation");

    auto comps = node_compositions(report.optimized);
    const Composition& mix = comps.at("o4");
    require(mix.get("G") == Rational(14, 15), "G total is " + mix.get("G").str());
    require(mix.get("R") == Rational(106, 15), "R total is " + mix.get("R").str());

    Rational dev = (mix.get("G") / mix.total() - Rational(1, 9)).abs();
    require(dev == Rational(1, 180), "deviation is " + dev.str());
    require(dev <= Rational(1, 100), "deviation exceeds epsilon");

    require(report.savings.at("G") >= Rational(1), "glucose savings below 1 nl");
    require(report.savings.at("R") >= Rational(4), "reagent savings below 4 nl");
    log << "optimized 1:8 mix holds " << mix.get("G").str() << " G + " << mix.get("R").str()
        << " R (" << mix.get("G").decimal(2) << " / " << mix.get("R").decimal(2)
        << " nl), deviation 1/180 ~ 0.6%, saving 1 G + 4 R";
}

void criterion_tree_set(std::ostream& log) {
    auto result = bench::run_glucose_trees(TreeAlgorithm::Pruned4);
    const bench::BenchLine* unopt = result.find("nfb units");
    const bench::BenchLine* opt = result.find("opt units");
    require(unopt && opt, "bench rows missing");
    require(unopt->reagent == Rational(4) && unopt->buffer == Rational(9),
            "unshared consumption is " + unopt->reagent.str() + "," + unopt->buffer.str());
    require(opt->reagent <= Rational(2), "optimized G above 2 units");
    require(opt->buffer <= Rational(6), "optimized R above 6 units");
    log << "tree set: unshared (4 G, 9 R); shared (" << opt->reagent.str() << " G, "
        << opt->buffer.str() << " R) <= (2, 6)";
}

void criterion_cca_minimal(std::ostream& log) {
    auto result = bench::run_assay(fixtures::cca(), bench::MixerSetup::M1);
    const bench::BenchLine* minimal = result.find("minimal");
    require(minimal != nullptr, "minimal row missing");
    require(minimal->reagent == Rational(950, 16),
            "minimal R is " + minimal->reagent.str());
    require(minimal->buffer == Rational(3050, 16), "minimal B is " + minimal->buffer.str());
    require((minimal->reagent - Rational(60)).abs() <= Rational(1), "R not within 1 ul of 60");
    require((minimal->buffer - Rational(190)).abs() <= Rational(1), "B not within 1 ul of 190");
    log << "minimal = (950/16, 3050/16) ul = (59.375, 190.625), within 1 ul of (60, 190)";
}

void criterion_cca_arbitrary(std::ostream& log) {
    auto result = bench::run_assay(fixtures::cca(), bench::MixerSetup::Arbitrary);
    const bench::BenchLine* opt = result.find("opt arbitrary");
    require(opt != nullptr, "arbitrary row missing");
    require(opt->reagent == Rational(60), "arbitrary R is " + opt->reagent.str());
    require(opt->buffer == Rational(200), "arbitrary B is " + opt->buffer.str());
    log << "arbitrary mixers at 4 ul HTR -> exactly (60 R, 200 B)";
}

void criterion_cca_m1(std::ostream& log) {
    auto result = bench::run_assay(fixtures::cca(), bench::MixerSetup::M1);
    const bench::BenchLine* unopt = result.find("nfb m1");
    const bench::BenchLine* opt = result.find("opt m1");
    require(unopt && opt, "bench rows missing");
    // the only hard failure is optimization making things worse
    require(opt->reagent <= unopt->reagent && opt->buffer <= unopt->buffer,
            "optimization worsened consumption");

    Rational gap_r = (opt->reagent - Rational(75)).abs();
    Rational gap_b = (opt->buffer - Rational(225)).abs();
    log << "fixed m1: optimized (" << opt->reagent.str() << ", " << opt->buffer.str()
        << ") ul vs published (75, 225)";
    if (gap_r <= Rational(25) && gap_b <= Rational(25)) {
        log << "; gaps (" << gap_r.str() << ", " << gap_b.str()
            << ") within one 25 ul metering unit";
    } else {
        log << "; heuristic gaps (" << gap_r.str() << ", " << gap_b.str()
            << ") beyond one metering unit, reported not failed";
    }
}

void criterion_oracle(std::ostream& log) {
    for (int depth = 1; depth <= 3; ++depth) {
        NetworkGraph net = build_network(depth);
        std::int64_t denom = std::int64_t(1) << depth;
        for (std::int64_t k = 1; k < denom; k += 2) {
            ApproxRatio target{k, denom - k, depth, Rational(0)};
            for (int units = 1; units <= 2; ++units) {
                std::int64_t got =
                    nfb_best_tree(net, target, units, SearchMode::Exact).fluid_cost();
                std::int64_t want = oracle::min_flow_cost(target, units, depth);
                require(got == want, target.ratio_str() + " units " + std::to_string(units) +
                                         ": search " + std::to_string(got) + " != oracle " +
                                         std::to_string(want));
            }
        }
    }

    NetworkGraph exact_net = build_network(4);
    NetworkGraph pruned_net = build_network(4, true);
    for (std::int64_t k = 1; k < 16; k += 2) {
        ApproxRatio target{k, 16 - k, 4, Rational(0)};
        std::int64_t exact = nfb_best_tree(exact_net, target, 2, SearchMode::Exact).fluid_cost();
        std::int64_t pruned =
            nfb_best_tree(pruned_net, target, 2, SearchMode::Pruned4).fluid_cost();
        std::int64_t chain = min_mix_tree(target, 2).fluid_cost();
        require(exact <= pruned, target.ratio_str() + ": exact above pruned4");
        require(exact <= chain, target.ratio_str() + ": exact above min-mix");
    }
    log << "exact == oracle for all depth<=3 targets x {1,2} units; "
           "exact <= pruned4, min-mix on all 8 depth-4 targets";
}

void criterion_property_suite(std::ostream& log) {
    PipelineOptions popts;
    int arbitrary = 0, fixed = 0;
    for (int i = 0; i < 1000; ++i) {
        GeneratorOptions gopts;
        gopts.fixed_mixers = (i % 4 == 3); // every fourth instance on 1:1 hardware
        if (gopts.fixed_mixers) gopts.max_ops = 7;
        GeneratedInstance inst = random_instance(std::uint64_t(20000 + i), gopts);
        (gopts.fixed_mixers ? fixed : arbitrary) += 1;

        OptimizeReport report = optimize(inst.app, inst.arch, popts);
        std::string seed = " (seed " + std::to_string(inst.seed) + ")";
        require(report.diagnostics.empty(), "instance failed validation" + seed);
        require(report.audit.balanced, "conservation audit violated" + seed);
        require(underflow_report(report.optimized).empty(), "underflow" + seed);

        for (const auto& n : report.optimized.nodes) {
            if (!n.fva) continue;
            Rational total;
            for (const auto& [_, v] : *n.fva) {
                require(v.is_dispensable(inst.arch.htr), "volume off the HTR grid" + seed);
                total += v.amount();
            }
            const FfuClass& cls = inst.arch.require_class(n.ffu_class);
            require(total / Rational(n.replication_factor) <= cls.mhc.amount(),
                    "per-instance total above MHC" + seed);
        }
        for (const auto& [reagent, before] : report.consumption_before) {
            Rational after = report.consumption_after.count(reagent)
                                 ? report.consumption_after.at(reagent)
                                 : Rational(0);
            require(after <= before, "reuse increased " + reagent + seed);
        }
        try {
            topo_order(report.optimized);
        } catch (const CycleError&) {
            require(false, "optimized graph has a cycle" + seed);
        }
    }
    log << arbitrary << " arbitrary + " << fixed
        << " fixed-mixer instances: conservation exact, HTR grid, MHC bound, "
           "non-worsening, acyclic";
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "ratio approximation", 1.0, criterion_ratio_approximation},
        {2, "mix MVR arithmetic", 1.0, criterion_mvr},
        {3, "volume assignment scaling", 1.0, criterion_assignment},
        {4, "glucose leftover reuse", 1.0, criterion_glucose_lof},
        {5, "shared glucose tree set", 5.0, criterion_tree_set},
        {6, "cca minimal requirement", 1.0, criterion_cca_minimal},
        {7, "cca arbitrary mixers", 1.0, criterion_cca_arbitrary},
        {8, "cca fixed m1 optimization", 30.0, criterion_cca_m1},
        {9, "search optimality vs oracle", 60.0, criterion_oracle},
        {10, "randomized property suite", 120.0, criterion_property_suite},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        std::ostringstream log;
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.body(log);
        } catch (const std::exception& e) {
            error = e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = error.empty() && seconds < c.budget_seconds;
        if (!ok) ++failed;

        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  criterion " << c.number << " (" << c.title << ", "
             << std::fixed;
        line.precision(2);
        line << seconds << "s/" << c.budget_seconds << "s): ";
        if (!error.empty()) line << error;
        else if (seconds >= c.budget_seconds) line << "time budget exceeded; " << log.str();
        else line << log.str();
        std::cout << line.str() << "\n";
    }

    if (failed == 0) std::cout << "all 10 acceptance criteria hold\n";
    else std::cout << failed << " criteria failing\n";
    return failed;
}
