#include "mixflow/application.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mixflow {

std::string to_string(OpKind kind) {
    switch (kind) {
        case OpKind::Input: return "input";
        case OpKind::Mix: return "mix";
        case OpKind::Detect: return "detect";
        case OpKind::Generic: return "generic";
        case OpKind::Output: return "output";
    }
    return "unknown";
}

OpKind op_kind_from_string(const std::string& s) {
    if (s == "input") return OpKind::Input;
    if (s == "mix") return OpKind::Mix;
    if (s == "detect") return OpKind::Detect;
    if (s == "generic") return OpKind::Generic;
    if (s == "output") return OpKind::Output;
    throw ParseError("unknown operation kind '" + s + "'");
}

void Composition::add(const std::string& reagent, const Rational& volume) {
    if (volume.is_negative()) throw std::domain_error("negative composition entry");
    if (volume.is_zero()) return;
    parts_[reagent] += volume;
}

Rational Composition::get(const std::string& reagent) const {
    auto it = parts_.find(reagent);
    return it == parts_.end() ? Rational(0) : it->second;
}

Rational Composition::total() const {
    Rational t;
    for (const auto& [_, v] : parts_) t += v;
    return t;
}

Composition Composition::mixed_with(const Composition& other) const {
    Composition out = *this;
    for (const auto& [reagent, v] : other.parts_) out.add(reagent, v);
    return out;
}

Composition Composition::scaled(const Rational& fraction) const {
    if (fraction.is_negative()) throw std::domain_error("negative scale fraction");
    Composition out;
    for (const auto& [reagent, v] : parts_) out.add(reagent, v * fraction);
    return out;
}

std::map<std::string, Rational> Composition::shares() const {
    Rational t = total();
    if (t.is_zero()) throw std::domain_error("shares of an empty composition");
    std::map<std::string, Rational> out;
    for (const auto& [reagent, v] : parts_) out[reagent] = v / t;
    return out;
}

std::string Composition::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [reagent, v] : parts_) {
        if (!first) os << ", ";
        os << reagent << ":" << v.str();
        first = false;
    }
    os << "}";
    return os.str();
}

Composition mix_composition(const Composition& a, const Composition& b) {
    if (a.total().is_zero() || b.total().is_zero()) {
        throw std::domain_error("mix_composition needs two non-empty parcels");
    }
    return a.mixed_with(b);
}

const OpNode* ApplicationGraph::find_node(const std::string& id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

OpNode* ApplicationGraph::find_node(const std::string& id) {
    for (auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

const OpNode& ApplicationGraph::require_node(const std::string& id) const {
    const OpNode* n = find_node(id);
    if (!n) throw std::out_of_range("unknown node '" + id + "'");
    return *n;
}

OpNode& ApplicationGraph::require_node(const std::string& id) {
    OpNode* n = find_node(id);
    if (!n) throw std::out_of_range("unknown node '" + id + "'");
    return *n;
}

std::vector<const FlowEdge*> ApplicationGraph::in_edges(const std::string& id) const {
    std::vector<const FlowEdge*> out;
    for (const auto& e : edges) {
        if (e.to == id) out.push_back(&e);
    }
    return out;
}

std::vector<const FlowEdge*> ApplicationGraph::out_edges(const std::string& id) const {
    std::vector<const FlowEdge*> out;
    for (const auto& e : edges) {
        if (e.from == id) out.push_back(&e);
    }
    return out;
}

std::vector<FlowEdge*> ApplicationGraph::in_edges(const std::string& id) {
    std::vector<FlowEdge*> out;
    for (auto& e : edges) {
        if (e.to == id) out.push_back(&e);
    }
    return out;
}

std::vector<FlowEdge*> ApplicationGraph::out_edges(const std::string& id) {
    std::vector<FlowEdge*> out;
    for (auto& e : edges) {
        if (e.from == id) out.push_back(&e);
    }
    return out;
}

std::string ApplicationGraph::reagent_of(const std::string& input_id) const {
    auto it = inputs.find(input_id);
    return it == inputs.end() ? input_id : it->second;
}

namespace {

std::vector<std::string> kahn_order(const ApplicationGraph& app, bool reversed) {
    std::map<std::string, int> degree;
    std::map<std::string, std::vector<std::string>> next;
    for (const auto& n : app.nodes) degree[n.id] = 0;
    for (const auto& e : app.edges) {
        const std::string& src = reversed ? e.to : e.from;
        const std::string& dst = reversed ? e.from : e.to;
        if (!degree.count(src) || !degree.count(dst)) {
            throw std::out_of_range("edge references unknown node " + e.from + "->" + e.to);
        }
        next[src].push_back(dst);
        ++degree[dst];
    }

    std::set<std::string> ready;
    for (const auto& [id, d] : degree) {
        if (d == 0) ready.insert(id);
    }

    std::vector<std::string> order;
    order.reserve(app.nodes.size());
    while (!ready.empty()) {
        std::string id = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(id);
        for (const auto& succ : next[id]) {
            if (--degree[succ] == 0) ready.insert(succ);
        }
    }
    if (order.size() != app.nodes.size()) {
        throw CycleError("application graph contains a cycle");
    }
    return order;
}

} // namespace

std::vector<std::string> topo_order(const ApplicationGraph& app) {
    return kahn_order(app, false);
}

std::vector<std::string> reverse_topo_order(const ApplicationGraph& app) {
    return kahn_order(app, true);
}

} // namespace mixflow
