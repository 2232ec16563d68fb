#pragma once

#include "mixflow/application.hpp"
#include "mixflow/tree_share.hpp"

namespace mixflow::fixtures {

// Seven-operation demo application: three first-stage mixes feeding two
// detectors and a two-stage mix cascade. Assigning bare MVRs leaves the
// 4:1 mix upstream short by 2 nl; proper assignment scales the short mix
// by two.
ArchitectureSpec demo_architecture();
ApplicationGraph demo_application();

// Glucose test: four glucose/reagent dilutions (1:1, 1:2, 1:4, 1:8), each
// feeding its own detection. On this instance leftover reuse replaces 1 nl
// of glucose and 4 nl of reagent at the 1:8 mix.
ArchitectureSpec glucose_architecture();
ApplicationGraph glucose_application();

// The same four dilutions as unit-level mixing-tree targets (1:1 mixers,
// one chamber delivered per tree).
std::vector<TreeSetTarget> glucose_tree_targets(int precision = 4);

// Real-assay benchmark cases: five reagent/buffer samples each.
struct AssayCase {
    std::string name;
    std::string reagent = "R";
    std::string buffer = "B";
    std::vector<Rational> shares; // reagent share per sample
    Rational output_volume;       // microliters per sample
    int precision = 4;
    Rational arbitrary_htr;       // HTR when run on arbitrary-ratio hardware
    Rational arbitrary_epsilon;   // admissible share deviation in that mode
};

AssayCase cca(); // colorimetric cholesterol assay: 50 ul samples, level 4
AssayCase paa(); // proteasome activity assay: 100 ul samples, level 6

} // namespace mixflow::fixtures
