#include "mixflow/assignment.hpp"

#include <algorithm>
#include <numeric>

namespace mixflow {

Volume Mvr::total() const {
    Rational sum;
    for (const auto& [_, v] : per_edge) sum += v.amount();
    return Volume(sum);
}

namespace {

Volume round_up_to_htr(const Volume& v, const Volume& htr) {
    std::int64_t steps = ceil_div(v.amount(), htr.amount());
    return Volume(htr.amount() * Rational(steps));
}

// reduce the incoming ratio labels of a mix to their smallest integer
// numerators, e.g. 1/4 and 3/4 -> 1 and 3
std::map<std::string, std::int64_t> ratio_numerators(const ApplicationGraph& app,
                                                     const OpNode& node) {
    std::map<std::string, Rational> ratios;
    for (const auto* e : app.in_edges(node.id)) {
        if (e->lof) continue;
        if (!e->ratio) {
            throw std::invalid_argument("mix node '" + node.id + "' has an unlabelled edge");
        }
        ratios[e->from] = *e->ratio;
    }
    std::int64_t lcm = 1;
    for (const auto& [_, r] : ratios) lcm = std::lcm(lcm, r.den());
    std::map<std::string, std::int64_t> numerators;
    std::int64_t g = 0;
    for (const auto& [from, r] : ratios) {
        std::int64_t n = r.num() * (lcm / r.den());
        numerators[from] = n;
        g = std::gcd(g, n);
    }
    if (g > 1) {
        for (auto& [_, n] : numerators) n /= g;
    }
    return numerators;
}

} // namespace

Mvr compute_mvr(const ApplicationGraph& app, const OpNode& node, const ArchitectureSpec& arch) {
    Mvr mvr;
    const FfuClass& cls = arch.require_class(node.ffu_class);

    if (node.kind == OpKind::Mix) {
        for (const auto& [from, numerator] : ratio_numerators(app, node)) {
            mvr.per_edge[from] = Volume(arch.htr.amount() * Rational(numerator));
        }
        return mvr;
    }

    // single-input pass-through: class requirement, or the declared edge
    // demand when that is stricter
    Volume requirement = cls.mvr.is_zero() ? Volume(Rational(0))
                                           : round_up_to_htr(cls.mvr, arch.htr);
    for (const auto* e : app.in_edges(node.id)) {
        if (e->lof) continue;
        Volume declared = e->required_volume ? *e->required_volume : Volume(Rational(0));
        mvr.per_edge[e->from] = std::max(requirement, declared);
    }
    return mvr;
}

Volume edge_demand(const ApplicationGraph& app, const FlowEdge& edge) {
    if (edge.lof) {
        return edge.required_volume ? *edge.required_volume : Volume(Rational(0));
    }
    const OpNode& to = app.require_node(edge.to);
    if (to.kind == OpKind::Output) {
        return edge.required_volume ? *edge.required_volume : Volume(Rational(0));
    }
    if (to.fva) {
        auto it = to.fva->find(edge.from);
        if (it != to.fva->end()) return it->second;
    }
    return Volume(Rational(0));
}

namespace {

Volume required_fluid(const ApplicationGraph& app, const std::string& id) {
    Rational rf;
    for (const auto* e : app.out_edges(id)) rf += edge_demand(app, *e).amount();
    return Volume(rf);
}

void assign_node(ApplicationGraph& app, OpNode& node, const ArchitectureSpec& arch,
                 const AssignOptions& options, bool scale_to_demand) {
    if (node.kind == OpKind::Input || node.kind == OpKind::Output) return;

    Mvr mvr = compute_mvr(app, node, arch);
    Volume rf = scale_to_demand ? required_fluid(app, node.id) : Volume(Rational(0));

    std::map<std::string, Volume> fva = mvr.per_edge;
    int x = 0;
    Rational total = mvr.total().amount();

    if (node.kind == OpKind::Mix) {
        // multiplicative diamond: scale both inputs, ratio intact
        x = std::max<std::int64_t>(1, total.is_zero() ? 1 : ceil_div(rf.amount(), total));
        for (auto& [_, v] : fva) v = v.scaled(Rational(x));
        total = total * Rational(x);
    } else if (rf.amount() > total) {
        // additive diamond: top the single input up in HTR steps
        x = int(ceil_div(rf.amount() - total, arch.htr.amount()));
        for (auto& [_, v] : fva) v = v + Volume(arch.htr.amount() * Rational(x));
        total = total + arch.htr.amount() * Rational(x);
    }

    const FfuClass& cls = arch.require_class(node.ffu_class);
    int replication = 1;
    if (total > cls.mhc.amount()) {
        replication = static_replication(fva, cls, arch, options.max_replication);
    }

    node.fva = fva;
    node.scale_factor = x;
    node.replication_factor = replication;
}

} // namespace

ApplicationGraph assign_volumes(const ApplicationGraph& app, const ArchitectureSpec& arch,
                                const AssignOptions& options) {
    ApplicationGraph out = app;
    for (const auto& id : reverse_topo_order(out)) {
        assign_node(out, out.require_node(id), arch, options, true);
    }
    return out;
}

ApplicationGraph assign_bare_mvr(const ApplicationGraph& app, const ArchitectureSpec& arch) {
    ApplicationGraph out = app;
    for (const auto& id : reverse_topo_order(out)) {
        assign_node(out, out.require_node(id), arch, AssignOptions{}, false);
    }
    return out;
}

std::map<std::string, Volume> underflow_report(const ApplicationGraph& app) {
    std::map<std::string, Volume> shortages;
    for (const auto& n : app.nodes) {
        if (n.kind == OpKind::Input || n.kind == OpKind::Output) continue;
        if (!n.fva) continue;
        Rational supply;
        for (const auto* e : app.in_edges(n.id)) supply += edge_demand(app, *e).amount();
        Rational demand = required_fluid(app, n.id).amount();
        if (demand > supply) shortages[n.id] = Volume(demand - supply);
    }
    return shortages;
}

int static_replication(const std::map<std::string, Volume>& fva, const FfuClass& cls,
                       const ArchitectureSpec& arch, int max_replication) {
    for (int k = 1; k <= max_replication; ++k) {
        Rational per_instance_total;
        bool feasible = true;
        for (const auto& [_, v] : fva) {
            Rational share = v.amount() / Rational(k);
            if (share.is_zero() || !share.is_multiple_of(arch.htr.amount())) {
                feasible = false;
                break;
            }
            per_instance_total += share;
        }
        if (feasible && per_instance_total <= cls.mhc.amount()) return k;
    }
    throw NotSatisfiableError("no replication factor up to " + std::to_string(max_replication) +
                              " fits class '" + cls.name + "'");
}

ArbitraryAssignment assign_arbitrary(const MixTarget& target, const ArchitectureSpec& arch,
                                     const FfuClass& mixer, const Rational& epsilon) {
    const Rational htr = arch.htr.amount();
    const Rational mhc = mixer.mhc.amount();
    std::int64_t min_steps = std::max<std::int64_t>(2, ceil_div(target.required_output.amount(), htr));
    std::int64_t max_steps = (mhc / htr).floor();

    for (std::int64_t t = min_steps; t <= max_steps; ++t) {
        Rational total = htr * Rational(t);
        bool found = false;
        ArbitraryAssignment best;
        for (std::int64_t a = 1; a < t; ++a) {
            Rational vol_a = htr * Rational(a);
            Rational dev = (vol_a / total - target.share_a).abs();
            if (dev > epsilon) continue;
            if (!found || dev < best.deviation) {
                best = {Volume(vol_a), Volume(total - vol_a), dev};
                found = true;
            }
        }
        if (found) return best;
    }
    throw NotSatisfiableError("no HTR-multiple split of " + target.reagent_a + ":" +
                              target.reagent_b + " fits within the mixer capacity at the "
                              "given tolerance");
}

} // namespace mixflow
