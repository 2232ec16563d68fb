#include "mixflow/generator.hpp"

#include "mixflow/pipeline.hpp"

#include <random>

namespace mixflow {

namespace {

GeneratedInstance draw_instance(std::uint64_t seed, const GeneratorOptions& options) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) {
        return int(std::uniform_int_distribution<int>(lo, hi)(rng));
    };

    GeneratedInstance inst;
    inst.seed = seed;

    const std::int64_t htr_choices[] = {1, 2, 5};
    Rational htr(htr_choices[pick(0, 2)]);
    Rational mhc = htr * Rational(pick(18, 30));

    ArchitectureSpec& arch = inst.arch;
    arch.unit = "nl";
    arch.htr = Volume(htr);
    arch.mixer_technology =
        options.fixed_mixers ? MixerTechnology::Fixed1to1 : MixerTechnology::ArbitraryRatio;
    arch.ffu_classes = {
        {"input", Volume(mhc * Rational(64)), Volume(Rational(0)), 1},
        {"mixer", Volume(mhc), Volume(Rational(0)), options.fixed_mixers ? 2 : 1},
        {"detector", Volume(mhc), Volume(htr * Rational(pick(1, 2))), 1},
        {"output", Volume(mhc * Rational(64)), Volume(Rational(0)), 1},
    };

    ApplicationGraph& app = inst.app;
    int reagents = pick(2, options.max_reagents);
    std::vector<std::string> sources;
    for (int i = 0; i < reagents; ++i) {
        std::string id = "in" + std::to_string(i);
        OpNode n;
        n.id = id;
        n.kind = OpKind::Input;
        n.ffu_class = "input";
        app.nodes.push_back(n);
        app.inputs[id] = std::string(1, char('P' + i));
        sources.push_back(id);
    }

    int ops = pick(options.min_ops, options.max_ops);
    std::vector<std::string> op_ids;
    for (int i = 0; i < ops; ++i) {
        std::string id = (i < 10 ? "op0" : "op") + std::to_string(i);
        bool mix = op_ids.empty() ? true : pick(0, 99) < 70;
        OpNode n;
        n.id = id;
        n.kind = mix ? OpKind::Mix : OpKind::Detect;
        n.ffu_class = mix ? "mixer" : "detector";
        app.nodes.push_back(n);

        auto upstream = [&](const std::string& avoid) {
            // later ops draw mostly from earlier ops, sometimes from inputs
            while (true) {
                std::string cand;
                if (!op_ids.empty() && pick(0, 99) < 55) cand = op_ids[pick(0, int(op_ids.size()) - 1)];
                else cand = sources[pick(0, int(sources.size()) - 1)];
                if (cand != avoid) return cand;
            }
        };

        if (mix) {
            std::string a = upstream("");
            std::string b = upstream(a);
            // keep reduced numerators small so MVRs stay well under MHC
            int p = pick(1, 8);
            int q = pick(1, 8);
            Rational share(p, p + q);
            FlowEdge ea{a, id, share, std::nullopt};
            FlowEdge eb{b, id, Rational(1) - share, std::nullopt};
            app.edges.push_back(ea);
            app.edges.push_back(eb);
        } else {
            FlowEdge e{upstream(""), id, std::nullopt, Volume(htr * Rational(pick(1, 3)))};
            app.edges.push_back(e);
        }
        op_ids.push_back(id);
    }

    // every sink op gets a product or waste output; every other op may also
    // ship some product out
    int outs = 0;
    for (const auto& id : op_ids) {
        bool is_sink = app.out_edges(id).empty();
        if (!is_sink && pick(0, 99) < 25) continue;
        std::string out_id = "out" + std::to_string(outs++);
        OpNode n;
        n.id = out_id;
        n.kind = OpKind::Output;
        n.ffu_class = "output";
        app.nodes.push_back(n);
        Rational demand = is_sink ? htr * Rational(pick(0, 4)) : Rational(0);
        FlowEdge e{id, out_id, std::nullopt, Volume(demand)};
        app.edges.push_back(e);
    }

    return inst;
}

} // namespace

GeneratedInstance random_instance(std::uint64_t seed, const GeneratorOptions& options) {
    std::uint64_t current = seed;
    for (int attempt = 0; attempt < 64; ++attempt) {
        GeneratedInstance inst = draw_instance(current, options);
        if (validate(inst.app, inst.arch).empty()) {
            try {
                PipelineOptions popts;
                popts.precision = 4;
                ApplicationGraph working = inst.app;
                if (options.fixed_mixers) {
                    working = expand_for_fixed_mixers(working, inst.arch, popts);
                }
                assign_volumes(working, inst.arch);
                return inst;
            } catch (const NotSatisfiableError&) {
                // fall through to a fresh draw
            }
        }
        current = current * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    throw std::runtime_error("could not draw a satisfiable instance from seed " +
                             std::to_string(seed));
}

} // namespace mixflow
