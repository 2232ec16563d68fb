#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mixflow/dot_export.hpp"
#include "mixflow/fixtures.hpp"
#include "mixflow/json_io.hpp"
#include "mixflow/validate.hpp"

#include <random>

using namespace mixflow;

namespace {

ApplicationGraph tiny_graph() {
    ApplicationGraph app;
    app.inputs = {{"a", "A"}, {"b", "B"}};
    auto add_node = [&](const char* id, OpKind kind, const char* cls) {
        OpNode n;
        n.id = id;
        n.kind = kind;
        n.ffu_class = cls;
        app.nodes.push_back(n);
    };
    add_node("a", OpKind::Input, "input");
    add_node("b", OpKind::Input, "input");
    add_node("m", OpKind::Mix, "mixer");
    add_node("out", OpKind::Output, "output");
    FlowEdge ea{"a", "m", Rational(1, 4), std::nullopt};
    FlowEdge eb{"b", "m", Rational(3, 4), std::nullopt};
    FlowEdge eo{"m", "out", std::nullopt, Volume(Rational(4))};
    app.edges = {ea, eb, eo};
    return app;
}

} // namespace

TEST_CASE("validate accepts the demo graph") {
    auto app = fixtures::demo_application();
    auto arch = fixtures::demo_architecture();
    auto diags = validate(app, arch);
    for (const auto& d : diags) MESSAGE(d.str());
    CHECK(diags.empty());
}

TEST_CASE("validate flags self loops as cycles") {
    auto app = tiny_graph();
    FlowEdge self{"m", "m", Rational(1, 2), std::nullopt};
    app.edges.push_back(self);
    auto arch = fixtures::demo_architecture();
    bool found = false;
    for (const auto& d : validate(app, arch)) {
        if (d.code == DiagnosticCode::CycleDetected) found = true;
    }
    CHECK(found);
}

TEST_CASE("validate flags ratio sums different from one") {
    auto app = tiny_graph();
    for (auto& e : app.edges) {
        if (e.to == "m" && e.from == "b") e.ratio = Rational(1, 2);
    }
    auto arch = fixtures::demo_architecture();
    bool found = false;
    for (const auto& d : validate(app, arch)) {
        if (d.code == DiagnosticCode::RatioSumNotOne && d.subject == "m") found = true;
    }
    CHECK(found);
}

TEST_CASE("validate flags unknown classes and broken polarity") {
    auto app = tiny_graph();
    app.nodes[2].ffu_class = "warpdrive";
    auto arch = fixtures::demo_architecture();
    bool unknown = false;
    for (const auto& d : validate(app, arch)) {
        if (d.code == DiagnosticCode::UnknownFfuClass) unknown = true;
    }
    CHECK(unknown);

    // an operation that cannot reach any output is not polar
    ApplicationGraph orphan = tiny_graph();
    OpNode stray;
    stray.id = "stray";
    stray.kind = OpKind::Detect;
    stray.ffu_class = "detector";
    orphan.nodes.push_back(stray);
    FlowEdge e{"a", "stray", std::nullopt, Volume(Rational(2))};
    orphan.edges.push_back(e);
    bool not_polar = false;
    for (const auto& d : validate(orphan, fixtures::demo_architecture())) {
        if (d.code == DiagnosticCode::NotPolar && d.subject == "stray") not_polar = true;
    }
    CHECK(not_polar);
}

TEST_CASE("topological order is deterministic and sink first in reverse") {
    auto app = fixtures::demo_application();
    auto order = topo_order(app);
    REQUIRE(order.size() == app.nodes.size());
    // successors after predecessors
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    for (const auto& e : app.edges) CHECK(position[e.from] < position[e.to]);

    auto reverse = reverse_topo_order(app);
    std::map<std::string, std::size_t> rpos;
    for (std::size_t i = 0; i < reverse.size(); ++i) rpos[reverse[i]] = i;
    for (const auto& e : app.edges) CHECK(rpos[e.to] < rpos[e.from]);
}

TEST_CASE("reverse order breaks diamond ties by ascending id") {
    ApplicationGraph app;
    app.inputs = {{"o1", "X"}};
    auto add_node = [&](const char* id, OpKind kind, const char* cls) {
        OpNode n;
        n.id = id;
        n.kind = kind;
        n.ffu_class = cls;
        app.nodes.push_back(n);
    };
    add_node("o1", OpKind::Input, "input");
    add_node("o2", OpKind::Detect, "detector");
    add_node("o3", OpKind::Detect, "detector");
    add_node("o4", OpKind::Mix, "mixer");
    FlowEdge e1{"o1", "o2", std::nullopt, Volume(Rational(2))};
    FlowEdge e2{"o1", "o3", std::nullopt, Volume(Rational(2))};
    FlowEdge e3{"o2", "o4", Rational(1, 2), std::nullopt};
    FlowEdge e4{"o3", "o4", Rational(1, 2), std::nullopt};
    app.edges = {e1, e2, e3, e4};

    auto reverse = reverse_topo_order(app);
    REQUIRE(reverse.size() == 4);
    CHECK(reverse[0] == "o4");
    CHECK(reverse[1] == "o2");
    CHECK(reverse[2] == "o3");
    CHECK(reverse[3] == "o1");

    // single node
    ApplicationGraph single;
    OpNode n;
    n.id = "only";
    n.kind = OpKind::Input;
    n.ffu_class = "input";
    single.nodes.push_back(n);
    CHECK(topo_order(single) == std::vector<std::string>{"only"});

    // a real cycle reports CycleError
    ApplicationGraph loop = app;
    FlowEdge back{"o4", "o2", std::nullopt, Volume(Rational(1))};
    loop.edges.push_back(back);
    CHECK_THROWS_AS(topo_order(loop), CycleError);
}

TEST_CASE("mix_composition sums parcels component-wise") {
    Composition g, r;
    g.add("G", Rational(1));
    r.add("R", Rational(1));
    Composition mixed = mix_composition(g, r);
    CHECK(mixed.get("G") == Rational(1));
    CHECK(mixed.get("R") == Rational(1));
    CHECK(mixed.total() == Rational(2));

    Composition g2;
    g2.add("G", Rational(2));
    CHECK(mix_composition(g2, g2).get("G") == Rational(4));

    Composition half;
    half.add("G", Rational(3, 2));
    half.add("R", Rational(3, 2));
    Composition passed = half.scaled(Rational(2, 3));
    CHECK(passed.get("G") == Rational(1));
    CHECK(passed.get("R") == Rational(1));
}

TEST_CASE("mix_composition is commutative and associative") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> small(0, 5);
    const char* reagents[] = {"G", "R", "S"};
    for (int i = 0; i < 300; ++i) {
        Composition a, b, c;
        for (const char* reagent : reagents) {
            a.add(reagent, Rational(small(rng), 1 + small(rng)));
            b.add(reagent, Rational(small(rng), 1 + small(rng)));
            c.add(reagent, Rational(small(rng), 1 + small(rng)));
        }
        CHECK(a.mixed_with(b) == b.mixed_with(a));
        CHECK(a.mixed_with(b).mixed_with(c) == a.mixed_with(b.mixed_with(c)));
    }
}

TEST_CASE("json round trip is identity") {
    auto arch = fixtures::demo_architecture();
    auto app = fixtures::demo_application();

    auto arch2 = parse_architecture(serialize_architecture(arch));
    CHECK(arch2.unit == arch.unit);
    CHECK(arch2.htr == arch.htr);
    CHECK(arch2.mixer_technology == arch.mixer_technology);
    REQUIRE(arch2.ffu_classes.size() == arch.ffu_classes.size());
    for (std::size_t i = 0; i < arch.ffu_classes.size(); ++i) {
        CHECK(arch2.ffu_classes[i].name == arch.ffu_classes[i].name);
        CHECK(arch2.ffu_classes[i].mhc == arch.ffu_classes[i].mhc);
        CHECK(arch2.ffu_classes[i].mvr == arch.ffu_classes[i].mvr);
        CHECK(arch2.ffu_classes[i].chamber_count == arch.ffu_classes[i].chamber_count);
    }

    auto app2 = parse_application(serialize_application(app));
    REQUIRE(app2.nodes.size() == app.nodes.size());
    REQUIRE(app2.edges.size() == app.edges.size());
    CHECK(app2.inputs == app.inputs);
    for (std::size_t i = 0; i < app.nodes.size(); ++i) {
        CHECK(app2.nodes[i].id == app.nodes[i].id);
        CHECK(app2.nodes[i].kind == app.nodes[i].kind);
        CHECK(app2.nodes[i].ffu_class == app.nodes[i].ffu_class);
    }
    for (std::size_t i = 0; i < app.edges.size(); ++i) {
        CHECK(app2.edges[i].from == app.edges[i].from);
        CHECK(app2.edges[i].to == app.edges[i].to);
        CHECK(app2.edges[i].ratio == app.edges[i].ratio);
        CHECK(app2.edges[i].required_volume == app.edges[i].required_volume);
    }

    // serialized form is stable
    CHECK(serialize_document(app, arch) ==
          serialize_document(parse_application(serialize_application(app)),
                             parse_architecture(serialize_architecture(arch))));
}

TEST_CASE("malformed documents raise parse errors with context") {
    CHECK_THROWS_AS(parse_application("not json"), ParseError);
    CHECK_THROWS_AS(parse_application("{}"), ParseError);
    CHECK_THROWS_AS(parse_architecture(R"({"architecture": {"htr": "x"}})"), ParseError);
    CHECK_THROWS_AS(parse_architecture(R"({"architecture": {"htr": "1"}})"), ParseError);
    CHECK_THROWS_AS(
        parse_application(R"({"application": {"nodes": [{"id": "n"}], "edges": []}})"),
        ParseError);
    CHECK_THROWS_AS(parse_architecture(R"({"architecture": {"unit": "nl", "htr": "1",
        "ffu_classes": [], "mixer_technology": "antigravity"}})"),
                    ParseError);
}

TEST_CASE("mixing empty parcels is a domain error") {
    Composition full, empty;
    full.add("G", Rational(1));
    CHECK_THROWS_AS(mix_composition(full, empty), std::domain_error);
    CHECK_THROWS_AS(empty.shares(), std::domain_error);
}

TEST_CASE("volumes render as exact decimals with rational fallback") {
    CHECK(volume_to_string(Volume(Rational(5, 2))) == "2.5");
    CHECK(volume_to_string(Volume(Rational(1, 8))) == "0.125");
    CHECK(volume_to_string(Volume(Rational(10))) == "10");
    CHECK(volume_to_string(Volume(Rational(14, 15))) == "14/15");
    CHECK(Rational::parse(volume_to_string(Volume(Rational(14, 15)))) == Rational(14, 15));
}

TEST_CASE("dot export marks mixes and leftovers") {
    auto app = fixtures::demo_application();
    std::string dot = to_dot(app);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(dot.find("1/4") != std::string::npos);

    FlowEdge lof{"o1", "o6", std::nullopt, Volume(Rational(1))};
    lof.lof = true;
    app.edges.push_back(lof);
    dot = to_dot(app);
    CHECK(dot.find("style=dashed") != std::string::npos);
}
