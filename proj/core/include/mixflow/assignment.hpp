#pragma once

#include "mixflow/application.hpp"
#include "mixflow/mixing.hpp"

#include <map>

namespace mixflow {

struct NotSatisfiableError : std::runtime_error {
    explicit NotSatisfiableError(const std::string& what) : std::runtime_error(what) {}
};

// Minimum volume requirement per incoming edge, keyed by predecessor id.
struct Mvr {
    std::map<std::string, Volume> per_edge;

    Volume total() const;
};

// Mix nodes: HTR times the reduced ratio numerator per input. Pass-through
// nodes: the larger of the class MVR (rounded up to an HTR multiple) and the
// demand declared on the incoming edge.
Mvr compute_mvr(const ApplicationGraph& app, const OpNode& node, const ArchitectureSpec& arch);

struct AssignOptions {
    int max_replication = 16;
};

// Algorithm: single reverse-topological pass. Every node first sums the
// fluid its successors demand, then scales its MVR up (multiplicatively for
// mixes, additively in HTR steps otherwise) until the inputs cover that
// demand; oversized assignments split into parallel instances.
ApplicationGraph assign_volumes(const ApplicationGraph& app, const ArchitectureSpec& arch,
                                const AssignOptions& options = {});

// Assigns every node its bare MVR, ignoring downstream demand. Used to
// demonstrate underflow before proper assignment.
ApplicationGraph assign_bare_mvr(const ApplicationGraph& app, const ArchitectureSpec& arch);

// Demand on one edge of an assigned graph: the consumer's per-edge FVA, or
// the declared product volume for edges into outputs, or the parcel volume
// for leftover edges.
Volume edge_demand(const ApplicationGraph& app, const FlowEdge& edge);

// Shortage per node id: max(0, outgoing demand - incoming supply). Empty map
// means no underflow anywhere.
std::map<std::string, Volume> underflow_report(const ApplicationGraph& app);

// Smallest replication factor k <= max_replication such that every per-edge
// volume divides into k positive HTR multiples with per-instance totals
// within MHC. Throws NotSatisfiable when none exists.
int static_replication(const std::map<std::string, Volume>& fva, const FfuClass& cls,
                       const ArchitectureSpec& arch, int max_replication = 16);

struct ArbitraryAssignment {
    Volume vol_a;
    Volume vol_b;
    Rational deviation; // max absolute share deviation from the target
};

// Single-operation assignment for arbitrary-ratio mixers: the smallest pair
// of positive HTR multiples covering the required output within the mixer
// capacity whose shares sit within epsilon of the target; ties broken by
// smaller deviation, then smaller vol_a.
ArbitraryAssignment assign_arbitrary(const MixTarget& target, const ArchitectureSpec& arch,
                                     const FfuClass& mixer, const Rational& epsilon);

} // namespace mixflow
