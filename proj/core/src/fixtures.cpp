#include "mixflow/fixtures.hpp"

namespace mixflow::fixtures {

namespace {

OpNode node(std::string id, OpKind kind, std::string cls) {
    OpNode n;
    n.id = std::move(id);
    n.kind = kind;
    n.ffu_class = std::move(cls);
    return n;
}

FlowEdge ratio_edge(std::string from, std::string to, Rational ratio) {
    FlowEdge e;
    e.from = std::move(from);
    e.to = std::move(to);
    e.ratio = ratio;
    return e;
}

FlowEdge demand_edge(std::string from, std::string to, Rational volume) {
    FlowEdge e;
    e.from = std::move(from);
    e.to = std::move(to);
    e.required_volume = Volume(volume);
    return e;
}

ArchitectureSpec nanoliter_architecture() {
    ArchitectureSpec arch;
    arch.unit = "nl";
    arch.htr = Volume(Rational(1));
    arch.mixer_technology = MixerTechnology::ArbitraryRatio;
    arch.ffu_classes = {
        {"input", Volume(Rational(100)), Volume(Rational(0)), 1},
        {"mixer", Volume(Rational(10)), Volume(Rational(0)), 1},
        {"detector", Volume(Rational(10)), Volume(Rational(2)), 1},
        {"output", Volume(Rational(100)), Volume(Rational(0)), 1},
    };
    return arch;
}

} // namespace

ArchitectureSpec demo_architecture() { return nanoliter_architecture(); }

ApplicationGraph demo_application() {
    ApplicationGraph app;
    app.inputs = {{"in_a", "A"}, {"in_b", "B"}, {"in_c", "C"}};

    app.nodes.push_back(node("in_a", OpKind::Input, "input"));
    app.nodes.push_back(node("in_b", OpKind::Input, "input"));
    app.nodes.push_back(node("in_c", OpKind::Input, "input"));
    app.nodes.push_back(node("o1", OpKind::Mix, "mixer"));
    app.nodes.push_back(node("o2", OpKind::Mix, "mixer"));
    app.nodes.push_back(node("o3", OpKind::Mix, "mixer"));
    app.nodes.push_back(node("o4", OpKind::Detect, "detector"));
    app.nodes.push_back(node("o5", OpKind::Detect, "detector"));
    app.nodes.push_back(node("o6", OpKind::Mix, "mixer"));
    app.nodes.push_back(node("o7", OpKind::Mix, "mixer"));
    app.nodes.push_back(node("out_p", OpKind::Output, "output"));
    app.nodes.push_back(node("out_w", OpKind::Output, "output"));

    app.edges.push_back(ratio_edge("in_a", "o1", Rational(1, 4)));
    app.edges.push_back(ratio_edge("in_b", "o1", Rational(3, 4)));
    app.edges.push_back(ratio_edge("in_a", "o2", Rational(1, 2)));
    app.edges.push_back(ratio_edge("in_b", "o2", Rational(1, 2)));
    app.edges.push_back(ratio_edge("in_b", "o3", Rational(1, 2)));
    app.edges.push_back(ratio_edge("in_c", "o3", Rational(1, 2)));
    app.edges.push_back(demand_edge("o1", "o4", Rational(2)));
    app.edges.push_back(demand_edge("o2", "o5", Rational(2)));
    app.edges.push_back(ratio_edge("o3", "o6", Rational(4, 5)));
    app.edges.push_back(ratio_edge("in_a", "o6", Rational(1, 5)));
    app.edges.push_back(ratio_edge("o5", "o7", Rational(2, 5)));
    app.edges.push_back(ratio_edge("o6", "o7", Rational(3, 5)));
    app.edges.push_back(demand_edge("o7", "out_p", Rational(5)));
    app.edges.push_back(demand_edge("o4", "out_w", Rational(0)));
    return app;
}

ArchitectureSpec glucose_architecture() { return nanoliter_architecture(); }

ApplicationGraph glucose_application() {
    ApplicationGraph app;
    app.inputs = {{"in_g", "G"}, {"in_r", "R"}};

    app.nodes.push_back(node("in_g", OpKind::Input, "input"));
    app.nodes.push_back(node("in_r", OpKind::Input, "input"));

    struct Dilution {
        const char* mix;
        const char* detect;
        const char* out;
        Rational share_g;
        Rational demand; // detection draw and product volume
    };
    const Dilution dilutions[] = {
        {"o1", "d1", "out1", Rational(1, 2), Rational(2)},
        {"o2", "d2", "out2", Rational(1, 3), Rational(2)},
        {"o3", "d3", "out3", Rational(1, 5), Rational(2)},
        {"o4", "d4", "out4", Rational(1, 9), Rational(8)},
    };
    for (const auto& d : dilutions) {
        app.nodes.push_back(node(d.mix, OpKind::Mix, "mixer"));
        app.nodes.push_back(node(d.detect, OpKind::Detect, "detector"));
        app.nodes.push_back(node(d.out, OpKind::Output, "output"));
        app.edges.push_back(ratio_edge("in_g", d.mix, d.share_g));
        app.edges.push_back(ratio_edge("in_r", d.mix, Rational(1) - d.share_g));
        app.edges.push_back(demand_edge(d.mix, d.detect, d.demand));
        app.edges.push_back(demand_edge(d.detect, d.out, d.demand));
    }
    return app;
}

std::vector<TreeSetTarget> glucose_tree_targets(int precision) {
    const Rational shares[] = {Rational(1, 2), Rational(1, 3), Rational(1, 5), Rational(1, 9)};
    std::vector<TreeSetTarget> targets;
    int i = 0;
    for (const auto& share : shares) {
        TreeSetTarget t;
        t.name = "dilution" + std::to_string(++i);
        t.ratio = approximate_ratio(share, precision);
        t.units_out = 1; // the detector takes one chamber of the root mix
        targets.push_back(t);
    }
    return targets;
}

AssayCase cca() {
    AssayCase assay;
    assay.name = "cca";
    assay.shares = {Rational(1, 4), Rational(1, 16), Rational(3, 16), Rational(5, 16),
                    Rational(3, 8)};
    assay.output_volume = Rational(50);
    assay.precision = 4;
    assay.arbitrary_htr = Rational(4);
    assay.arbitrary_epsilon = Rational(1, 25);
    return assay;
}

AssayCase paa() {
    AssayCase assay;
    assay.name = "paa";
    assay.shares = {Rational(1, 8), Rational(3, 32), Rational(5, 64), Rational(1, 16),
                    Rational(1, 32)};
    assay.output_volume = Rational(100);
    assay.precision = 6;
    assay.arbitrary_htr = Rational(4);
    assay.arbitrary_epsilon = Rational(1, 25);
    return assay;
}

} // namespace mixflow::fixtures
