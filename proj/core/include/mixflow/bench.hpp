#pragma once

#include "mixflow/fixtures.hpp"
#include "mixflow/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mixflow::bench {

enum class MixerSetup {
    M1,        // fixed 1:1 mixers sized to the sample output volume
    M2,        // fixed 1:1 mixers holding double the sample output volume
    Arbitrary, // arbitrary-ratio mixers at the assay's coarse HTR
};

MixerSetup mixer_setup_from_string(const std::string& s);
std::string to_string(MixerSetup setup);

// One consumption line of a bench table, tagged with the provenance of its
// numbers: "exact" for closed-form arithmetic, "derived" for values this
// implementation computes, "published" for the reference figures the run is
// compared against.
struct BenchLine {
    std::string label;
    Rational reagent;
    Rational buffer;
    std::string tag;
};

struct AssayBenchResult {
    std::string assay;
    MixerSetup setup = MixerSetup::M1;
    std::vector<ApproxRatio> approximated; // one per sample
    std::vector<BenchLine> lines;

    const BenchLine* find(const std::string& label) const;
};

// Runs one assay end to end: approximates the sample ratios, computes the
// minimal requirement, and either plans the 1:1 mixing-tree set without and
// with leftover sharing (M1/M2) or assigns arbitrary-ratio mixers.
AssayBenchResult run_assay(const fixtures::AssayCase& assay, MixerSetup setup,
                           TreeAlgorithm algorithm = TreeAlgorithm::Pruned4);

// The four-dilution tree set: consumption in chamber units without and with
// leftover sharing.
AssayBenchResult run_glucose_trees(TreeAlgorithm algorithm = TreeAlgorithm::Pruned4);

// One random-ratio comparison row of minmix/exact/pruned4.
struct CompareRow {
    ApproxRatio target;
    std::int64_t cost_minmix = 0;
    std::int64_t cost_exact = 0;
    std::int64_t cost_pruned4 = 0;
    std::int64_t ops_minmix = 0;
    std::int64_t ops_exact = 0;
    std::int64_t ops_pruned4 = 0;
    double ms_minmix = 0;
    double ms_exact = 0;
    double ms_pruned4 = 0;
    bool ordering_ok = false;      // exact <= pruned4 and exact <= minmix
    bool budget_exhausted = false; // either search hit the state budget
};

// Seeded uniform odd targets at the given depth, two units out each.
std::vector<CompareRow> compare_algorithms(std::uint64_t seed, int count, int depth,
                                           const SearchOptions& options = {});

} // namespace mixflow::bench
