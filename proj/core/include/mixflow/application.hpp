#pragma once

#include "mixflow/architecture.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mixflow {

struct CycleError : std::runtime_error {
    explicit CycleError(const std::string& what) : std::runtime_error(what) {}
};

enum class OpKind { Input, Mix, Detect, Generic, Output };

std::string to_string(OpKind kind);
OpKind op_kind_from_string(const std::string& s);

// Fluid content broken down by original input reagent. Entries are volumes,
// so total() is the physical amount of the parcel.
class Composition {
public:
    Composition() = default;

    void add(const std::string& reagent, const Rational& volume);
    Rational get(const std::string& reagent) const;
    Rational total() const;
    bool empty() const { return parts_.empty(); }

    // Component-wise sum; models pouring two parcels together.
    Composition mixed_with(const Composition& other) const;

    // The same mixture scaled to a fraction of its volume.
    Composition scaled(const Rational& fraction) const;

    // Shares per reagent (entries divided by total). Total must be > 0.
    std::map<std::string, Rational> shares() const;

    const std::map<std::string, Rational>& parts() const { return parts_; }

    bool operator==(const Composition& rhs) const { return parts_ == rhs.parts_; }

    std::string str() const;

private:
    std::map<std::string, Rational> parts_;
};

// mix_composition({G:1}, {R:1}) == {G:1, R:1}; commutative and associative.
Composition mix_composition(const Composition& a, const Composition& b);

struct OpNode {
    std::string id;
    OpKind kind = OpKind::Generic;
    std::string ffu_class;
    // Assigned fluid volume per incoming edge, keyed by predecessor node id.
    std::optional<std::map<std::string, Volume>> fva;
    int scale_factor = 0;       // the x of the diamond rule, once assigned
    int replication_factor = 1; // parallel instances after static replication
    bool waste_sink = false;    // output that receives discarded fluid
};

struct FlowEdge {
    std::string from;
    std::string to;
    std::optional<Rational> ratio;        // mixing share, edges into Mix nodes
    std::optional<Volume> required_volume; // demand, edges into non-Mix nodes
    bool lof = false;                      // true for reassigned leftover edges
    std::optional<Composition> lof_composition;
};

class ApplicationGraph {
public:
    std::vector<OpNode> nodes;
    std::vector<FlowEdge> edges;
    // reservoir node id -> reagent label dispensed by that input
    std::map<std::string, std::string> inputs;

    const OpNode* find_node(const std::string& id) const;
    OpNode* find_node(const std::string& id);
    const OpNode& require_node(const std::string& id) const;
    OpNode& require_node(const std::string& id);

    std::vector<const FlowEdge*> in_edges(const std::string& id) const;
    std::vector<const FlowEdge*> out_edges(const std::string& id) const;
    std::vector<FlowEdge*> in_edges(const std::string& id);
    std::vector<FlowEdge*> out_edges(const std::string& id);

    // Reagent label for an input node (falls back to the node id).
    std::string reagent_of(const std::string& input_id) const;
};

// Deterministic topological order: every node after all of its predecessors,
// ties broken by ascending node id. Throws CycleError when not a DAG.
std::vector<std::string> topo_order(const ApplicationGraph& app);

// Sink-first order: every node after all of its successors, ties ascending.
std::vector<std::string> reverse_topo_order(const ApplicationGraph& app);

} // namespace mixflow
