#include "mixflow/pipeline.hpp"

#include <algorithm>

namespace mixflow {

std::string to_string(TreeAlgorithm algo) {
    switch (algo) {
        case TreeAlgorithm::MinMix: return "minmix";
        case TreeAlgorithm::Exact: return "exact";
        case TreeAlgorithm::Pruned4: return "pruned4";
    }
    return "unknown";
}

TreeAlgorithm tree_algorithm_from_string(const std::string& s) {
    if (s == "minmix" || s == "min-mix" || s == "mm") return TreeAlgorithm::MinMix;
    if (s == "exact" || s == "nfb") return TreeAlgorithm::Exact;
    if (s == "pruned4" || s == "nfb4") return TreeAlgorithm::Pruned4;
    throw ParseError("unknown tree algorithm '" + s + "'");
}

std::map<Rational, std::pair<Rational, Rational>> tree_structure(const MixingTree& tree) {
    // nearest-parent pair per concentration
    std::map<Rational, std::pair<Rational, Rational>> choice;
    std::map<Rational, Rational> delta;
    for (const auto& s : tree.steps) {
        Rational d = s.conc - s.parent_lo;
        auto it = delta.find(s.conc);
        if (it == delta.end() || d < it->second) {
            delta[s.conc] = d;
            choice[s.conc] = {s.parent_lo, s.parent_hi};
        }
    }

    std::map<Rational, std::pair<Rational, Rational>> closed;
    std::vector<Rational> work{tree.target};
    while (!work.empty()) {
        Rational conc = work.back();
        work.pop_back();
        if (NetworkGraph::level_of(conc) == 0 || closed.count(conc)) continue;
        auto it = choice.find(conc);
        if (it == choice.end()) {
            throw std::logic_error("tree has no producer for " + conc.str());
        }
        closed[conc] = it->second;
        work.push_back(it->second.first);
        work.push_back(it->second.second);
    }
    return closed;
}

namespace {

MixingTree synthesize_tree(const ApproxRatio& ratio, const PipelineOptions& options) {
    if (options.algorithm == TreeAlgorithm::MinMix) return min_mix_tree(ratio, 2);
    bool pruned = options.algorithm == TreeAlgorithm::Pruned4;
    NetworkGraph net = build_network(std::max(options.precision, ratio.depth), pruned);
    return nfb_best_tree(net, ratio, 2, pruned ? SearchMode::Pruned4 : SearchMode::Exact, {},
                         options.search);
}

std::string conc_suffix(const Rational& conc) {
    return std::to_string(conc.num()) + "_" + std::to_string(conc.den());
}

} // namespace

ApplicationGraph expand_for_fixed_mixers(const ApplicationGraph& app,
                                         const ArchitectureSpec& /*arch*/,
                                         const PipelineOptions& options) {
    ApplicationGraph out = app;

    std::vector<std::string> mix_ids;
    for (const auto& n : out.nodes) {
        if (n.kind == OpKind::Mix) mix_ids.push_back(n.id);
    }

    for (const auto& id : mix_ids) {
        auto in = out.in_edges(id);
        if (in.size() != 2) continue;
        // stable reagent-side convention: A is the first edge by source id
        const FlowEdge* edge_a = in[0]->from < in[1]->from ? in[0] : in[1];
        const FlowEdge* edge_b = in[0]->from < in[1]->from ? in[1] : in[0];
        if (!edge_a->ratio || !edge_b->ratio) continue;
        Rational share_a = *edge_a->ratio;
        if (share_a == Rational(1, 2)) continue; // a single 1:1 step already

        ApproxRatio approx = approximate_ratio(share_a, options.precision);
        auto structure = tree_structure(synthesize_tree(approx, options));

        const OpNode& original = out.require_node(id);
        std::string src_a = edge_a->from;
        std::string src_b = edge_b->from;
        std::string ffu_class = original.ffu_class;

        // drop the original incoming edges; the root step keeps the node id
        std::erase_if(out.edges, [&](const FlowEdge& e) { return e.to == id; });

        auto node_name = [&](const Rational& conc) -> std::string {
            if (conc == approx.share_a()) return id;
            return id + "__" + conc_suffix(conc);
        };
        auto source_name = [&](const Rational& conc) -> std::string {
            if (conc == Rational(1)) return src_a;
            if (conc == Rational(0)) return src_b;
            return node_name(conc);
        };

        for (const auto& [conc, parents] : structure) {
            if (conc != approx.share_a()) {
                OpNode step;
                step.id = node_name(conc);
                step.kind = OpKind::Mix;
                step.ffu_class = ffu_class;
                out.nodes.push_back(step);
            }
            FlowEdge lo_edge{source_name(parents.first), node_name(conc),
                             Rational(1, 2), std::nullopt};
            FlowEdge hi_edge{source_name(parents.second), node_name(conc),
                             Rational(1, 2), std::nullopt};
            out.edges.push_back(lo_edge);
            out.edges.push_back(hi_edge);
        }
    }
    return out;
}

namespace {

// Route every residual leftover to its own waste-sink output, so discarded
// fluid shows up as graph edges rather than implicit node imbalances.
void materialize_waste_sinks(ApplicationGraph& app, const std::vector<Leftover>& residual) {
    if (residual.empty()) return;
    std::string output_class;
    for (const auto& n : app.nodes) {
        if (n.kind == OpKind::Output) {
            output_class = n.ffu_class;
            break;
        }
    }
    if (output_class.empty()) return;

    for (const auto& lof : residual) {
        OpNode sink;
        sink.id = "waste__" + lof.source;
        sink.kind = OpKind::Output;
        sink.ffu_class = output_class;
        sink.waste_sink = true;
        app.nodes.push_back(sink);

        FlowEdge e;
        e.from = lof.source;
        e.to = sink.id;
        e.required_volume = lof.volume;
        app.edges.push_back(e);
    }
}

} // namespace

OptimizeReport optimize(const ApplicationGraph& app, const ArchitectureSpec& arch,
                        const PipelineOptions& options) {
    OptimizeReport report;
    report.diagnostics = validate(app, arch);
    if (!report.diagnostics.empty()) return report;

    ApplicationGraph working = app;
    if (arch.mixer_technology == MixerTechnology::Fixed1to1) {
        working = expand_for_fixed_mixers(working, arch, options);
    }

    report.assigned = assign_volumes(working, arch, options.assign);
    report.leftovers_before = extract_leftovers(report.assigned);

    if (options.reuse_leftovers) {
        ReassignOptions ropts = options.reassign;
        ropts.epsilon = options.epsilon;
        ReassignResult rr = reassign_leftovers(report.assigned, arch, ropts);
        report.optimized = std::move(rr.app);
        report.consumption_before = std::move(rr.consumption_before);
        report.consumption_after = std::move(rr.consumption_after);
        report.savings = std::move(rr.savings);
        report.residual = std::move(rr.residual);
    } else {
        report.optimized = report.assigned;
        report.consumption_before = reservoir_consumption(report.assigned);
        report.consumption_after = report.consumption_before;
        report.residual = report.leftovers_before;
    }

    if (options.materialize_waste) {
        materialize_waste_sinks(report.optimized, report.residual);
    }

    report.audit = audit_conservation(report.optimized);
    return report;
}

} // namespace mixflow
