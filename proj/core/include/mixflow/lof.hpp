#pragma once

#include "mixflow/assignment.hpp"

#include <map>
#include <vector>

namespace mixflow {

// Excess fluid parcel a node produces beyond what its successors take.
struct Leftover {
    std::string source;
    Volume volume;
    Composition composition; // in original input reagents, totals to volume
};

// Output-side composition of every node (keyed by id), tracked exactly from
// the input reservoirs through all mixing steps of an assigned graph.
std::map<std::string, Composition> node_compositions(const ApplicationGraph& app);

// One leftover per node whose combined input exceeds its combined outgoing
// demand. Requires a fully assigned graph.
std::vector<Leftover> extract_leftovers(const ApplicationGraph& app);

struct ReassignOptions {
    // Admissible ratio drift: max absolute share deviation per reagent.
    Rational epsilon = Rational(1, 100);
    // Leftovers considered per target (largest first).
    std::size_t max_candidates = 5;
    // Hard cap on per-target search states.
    std::int64_t search_budget = 50'000;
};

struct ReassignResult {
    ApplicationGraph app; // leftover edges added, reservoir draws shrunk
    std::map<std::string, Rational> consumption_before; // per reagent
    std::map<std::string, Rational> consumption_after;
    std::map<std::string, Rational> savings;
    std::vector<Leftover> residual; // what still goes to waste
};

// Algorithm: walk the targets in forward topological
// order; each may replace reservoir-sourced volume by parcels taken from
// leftovers of already-finalized nodes, possibly combining several, whenever
// every transferred volume is an HTR multiple and the resulting reagent
// shares stay within epsilon of the node's assigned mixture. Reservoir
// consumption never increases.
ReassignResult reassign_leftovers(const ApplicationGraph& app, const ArchitectureSpec& arch,
                                  const ReassignOptions& options = {});

// Per-reagent reservoir draw of an assigned graph.
std::map<std::string, Rational> reservoir_consumption(const ApplicationGraph& app);

struct ConservationAudit {
    std::map<std::string, Rational> dispensed; // drawn from input reservoirs
    std::map<std::string, Rational> delivered; // reached output nodes
    std::map<std::string, Rational> discarded; // residual leftovers
    bool balanced = false; // dispensed == delivered + discarded, per reagent
};

ConservationAudit audit_conservation(const ApplicationGraph& app);

} // namespace mixflow
