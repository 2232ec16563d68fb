#include <benchmark/benchmark.h>

#include "mixflow/fixtures.hpp"
#include "mixflow/generator.hpp"
#include "mixflow/pipeline.hpp"

using namespace mixflow;

namespace {

ApproxRatio odd_target(int depth, std::int64_t k) {
    std::int64_t denom = std::int64_t(1) << depth;
    return ApproxRatio{k, denom - k, depth, Rational(0)};
}

void BM_BuildNetwork(benchmark::State& state) {
    int depth = int(state.range(0));
    for (auto _ : state) {
        NetworkGraph net = build_network(depth);
        benchmark::DoNotOptimize(net);
    }
}
BENCHMARK(BM_BuildNetwork)->Arg(4)->Arg(8)->Arg(12);

void BM_MinMix(benchmark::State& state) {
    int depth = int(state.range(0));
    ApproxRatio target = odd_target(depth, (std::int64_t(1) << depth) / 2 + 1);
    for (auto _ : state) {
        MixingTree tree = min_mix_tree(target, 2);
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(BM_MinMix)->Arg(4)->Arg(8)->Arg(10);

void BM_NfbExact(benchmark::State& state) {
    int depth = int(state.range(0));
    NetworkGraph net = build_network(depth);
    ApproxRatio target = odd_target(depth, (std::int64_t(1) << depth) / 2 + 1);
    for (auto _ : state) {
        MixingTree tree = nfb_best_tree(net, target, 2, SearchMode::Exact);
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(BM_NfbExact)->Arg(4)->Arg(5)->Arg(6);

void BM_NfbPruned4(benchmark::State& state) {
    int depth = int(state.range(0));
    NetworkGraph net = build_network(depth, true);
    ApproxRatio target = odd_target(depth, (std::int64_t(1) << depth) / 2 + 1);
    for (auto _ : state) {
        MixingTree tree = nfb_best_tree(net, target, 2, SearchMode::Pruned4);
        benchmark::DoNotOptimize(tree);
    }
}
BENCHMARK(BM_NfbPruned4)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_TreeSetSharing(benchmark::State& state) {
    auto targets = fixtures::glucose_tree_targets();
    NetworkGraph net = build_network(4, true);
    for (auto _ : state) {
        TreeSetPlan plan = select_tree_variants(targets, net, SearchMode::Pruned4);
        benchmark::DoNotOptimize(plan);
    }
}
BENCHMARK(BM_TreeSetSharing);

void BM_AssignVolumes(benchmark::State& state) {
    GeneratedInstance inst = random_instance(std::uint64_t(state.range(0)));
    for (auto _ : state) {
        ApplicationGraph assigned = assign_volumes(inst.app, inst.arch);
        benchmark::DoNotOptimize(assigned);
    }
}
BENCHMARK(BM_AssignVolumes)->Arg(1)->Arg(2)->Arg(3);

void BM_GlucosePipeline(benchmark::State& state) {
    ApplicationGraph app = fixtures::glucose_application();
    ArchitectureSpec arch = fixtures::glucose_architecture();
    for (auto _ : state) {
        OptimizeReport report = optimize(app, arch);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_GlucosePipeline);

} // namespace

BENCHMARK_MAIN();
