#pragma once

#include "mixflow/lof.hpp"
#include "mixflow/tree_share.hpp"
#include "mixflow/validate.hpp"

namespace mixflow {

enum class TreeAlgorithm { MinMix, Exact, Pruned4 };

std::string to_string(TreeAlgorithm algo);
TreeAlgorithm tree_algorithm_from_string(const std::string& s);

struct PipelineOptions {
    int precision = 4;
    TreeAlgorithm algorithm = TreeAlgorithm::Pruned4;
    bool reuse_leftovers = true;
    // route residual leftovers to explicit waste-sink outputs
    bool materialize_waste = true;
    Rational epsilon = Rational(1, 100);
    AssignOptions assign;
    ReassignOptions reassign;
    SearchOptions search;
};

// Parent choice per concentration of a synthesized mixing tree, closed from
// the target down to the pure reagents. Used to splice trees into graphs.
std::map<Rational, std::pair<Rational, Rational>> tree_structure(const MixingTree& tree);

// Replaces every mix node whose share is not exactly 1/2 with a DAG of 1:1
// mixing steps realizing the dyadic approximation of its ratio. The root step
// keeps the original node id and outgoing edges.
ApplicationGraph expand_for_fixed_mixers(const ApplicationGraph& app,
                                         const ArchitectureSpec& arch,
                                         const PipelineOptions& options);

struct OptimizeReport {
    std::vector<Diagnostic> diagnostics; // non-empty means nothing else ran
    ApplicationGraph assigned;
    ApplicationGraph optimized;
    std::vector<Leftover> leftovers_before;
    std::vector<Leftover> residual;
    std::map<std::string, Rational> consumption_before;
    std::map<std::string, Rational> consumption_after;
    std::map<std::string, Rational> savings;
    ConservationAudit audit;
};

// validate -> expand (fixed mixers) -> assign -> extract -> reassign.
// Throws NotSatisfiableError when demand cannot be met within the hardware
// bounds; validation problems come back as diagnostics instead.
OptimizeReport optimize(const ApplicationGraph& app, const ArchitectureSpec& arch,
                        const PipelineOptions& options = {});

} // namespace mixflow
