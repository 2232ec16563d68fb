#include "mixflow/lof.hpp"

#include <algorithm>
#include <set>

namespace mixflow {

namespace {

// volume flowing on an edge into `to`, as assigned
Rational edge_volume(const ApplicationGraph& app, const FlowEdge& e) {
    if (e.lof) return e.required_volume ? e.required_volume->amount() : Rational(0);
    const OpNode& to = app.require_node(e.to);
    if (to.kind == OpKind::Output) {
        return e.required_volume ? e.required_volume->amount() : Rational(0);
    }
    if (to.fva) {
        auto it = to.fva->find(e.from);
        if (it != to.fva->end()) return it->second.amount();
    }
    return Rational(0);
}

Rational input_total(const ApplicationGraph& app, const std::string& id) {
    Rational total;
    for (const auto* e : app.in_edges(id)) total += edge_volume(app, *e);
    return total;
}

Rational output_demand(const ApplicationGraph& app, const std::string& id) {
    Rational total;
    for (const auto* e : app.out_edges(id)) total += edge_volume(app, *e);
    return total;
}

} // namespace

std::map<std::string, Composition> node_compositions(const ApplicationGraph& app) {
    std::map<std::string, Composition> comp;
    for (const auto& id : topo_order(app)) {
        const OpNode& node = app.require_node(id);
        if (node.kind == OpKind::Input) {
            Composition c;
            Rational dispensed = output_demand(app, id);
            if (!dispensed.is_zero()) c.add(app.reagent_of(id), dispensed);
            comp[id] = c;
            continue;
        }
        Composition c;
        for (const auto* e : app.in_edges(id)) {
            Rational vol = edge_volume(app, *e);
            if (vol.is_zero()) continue;
            if (e->lof && e->lof_composition) {
                c = c.mixed_with(*e->lof_composition);
                continue;
            }
            const Composition& src = comp.at(e->from);
            Rational src_total = src.total();
            if (src_total.is_zero()) continue;
            c = c.mixed_with(src.scaled(vol / src_total));
        }
        comp[id] = c;
    }
    return comp;
}

std::vector<Leftover> extract_leftovers(const ApplicationGraph& app) {
    auto comps = node_compositions(app);
    std::vector<Leftover> leftovers;
    for (const auto& n : app.nodes) {
        if (n.kind == OpKind::Input || n.kind == OpKind::Output) continue;
        Rational in = input_total(app, n.id);
        Rational out = output_demand(app, n.id);
        if (in <= out) continue;
        Rational excess = in - out;
        const Composition& c = comps.at(n.id);
        Rational total = c.total();
        Leftover lof;
        lof.source = n.id;
        lof.volume = Volume(excess);
        lof.composition = total.is_zero() ? Composition{} : c.scaled(excess / total);
        leftovers.push_back(std::move(lof));
    }
    return leftovers;
}

std::map<std::string, Rational> reservoir_consumption(const ApplicationGraph& app) {
    std::map<std::string, Rational> out;
    for (const auto& n : app.nodes) {
        if (n.kind != OpKind::Input) continue;
        Rational total = output_demand(app, n.id);
        if (!total.is_zero()) out[app.reagent_of(n.id)] += total;
    }
    return out;
}

namespace {

struct PoolEntry {
    std::string source;
    Rational remaining;
    Composition unit; // composition per one volume unit
};

struct TargetContext {
    Rational fixed_total;          // internal (non-reservoir) inflow
    Composition fixed_comp;
    std::map<std::string, Rational> reservoir; // reagent -> current draw
    std::map<std::string, std::vector<std::string>> reservoir_edges; // reagent -> input ids
    std::map<std::string, Rational> shares;    // assigned mixture shares
    Rational rf;                   // downstream demand, fixed
    Rational capacity;             // MHC * replication
    Rational step;                 // HTR * replication
};

struct Plan {
    std::vector<Rational> takes;                 // aligned with candidates
    std::map<std::string, Rational> reservoir;   // reagent -> new draw
    Rational consumption;
    bool valid = false;
};

// Given chosen parcels, find the cheapest feasible total volume and the
// reservoir split realizing it. Totals walk up in HTR steps, so the first
// feasible total is the cheapest.
bool solve_reservoir(const TargetContext& ctx, const Composition& parcels,
                     const Rational& epsilon, Plan& plan) {
    Rational parcel_total = parcels.total();
    // parcels must not bring reagents the target mixture does not contain
    for (const auto& [reagent, v] : parcels.parts()) {
        if (!v.is_zero() && !ctx.shares.count(reagent)) return false;
    }

    Rational t_floor = ctx.fixed_total + parcel_total;
    if (ctx.rf > t_floor) {
        std::int64_t steps = ceil_div(ctx.rf - t_floor, ctx.step);
        t_floor += ctx.step * Rational(steps);
    }

    for (Rational total = t_floor; total <= ctx.capacity; total += ctx.step) {
        if (total.is_zero()) {
            // nothing demanded and nothing supplied: trivially consistent
            plan.reservoir.clear();
            plan.consumption = Rational(0);
            plan.valid = true;
            return true;
        }
        Rational need = total - ctx.fixed_total - parcel_total;
        std::map<std::string, Rational> lo, hi;
        Rational lo_sum, hi_sum;
        bool feasible = true;
        for (const auto& [reagent, share] : ctx.shares) {
            Rational have = ctx.fixed_comp.get(reagent) + parcels.get(reagent);
            bool can_draw = ctx.reservoir_edges.count(reagent) > 0;
            Rational lo_r(0), hi_r(0);
            if (can_draw) {
                Rational min_r = total * (share - epsilon) - have;
                Rational max_r = total * (share + epsilon) - have;
                if (max_r < Rational(0)) {
                    feasible = false;
                    break;
                }
                if (min_r > Rational(0)) {
                    lo_r = ctx.step * Rational(ceil_div(min_r, ctx.step));
                }
                hi_r = ctx.step * Rational((max_r / ctx.step).floor());
                if (lo_r > hi_r) {
                    feasible = false;
                    break;
                }
            } else {
                // no reservoir edge for this reagent: the share must already fit
                if ((have / total - share).abs() > epsilon) {
                    feasible = false;
                    break;
                }
            }
            lo[reagent] = lo_r;
            hi[reagent] = hi_r;
            lo_sum += lo_r;
            hi_sum += hi_r;
        }
        if (!feasible || need < lo_sum || need > hi_sum) continue;

        // distribute: start at the lower bounds, hand out the remainder in
        // reagent order
        std::map<std::string, Rational> res = lo;
        Rational remainder = need - lo_sum;
        for (const auto& [reagent, hi_r] : hi) {
            if (remainder.is_zero()) break;
            Rational room = hi_r - res[reagent];
            Rational grant = std::min(room, remainder);
            // keep grants on the step grid
            Rational ticks = Rational((grant / ctx.step).floor());
            grant = ctx.step * ticks;
            res[reagent] += grant;
            remainder -= grant;
        }
        if (!remainder.is_zero()) continue;

        plan.reservoir = res;
        plan.consumption = need;
        plan.valid = true;
        return true;
    }
    return false;
}

class TargetSearch {
public:
    TargetSearch(const TargetContext& ctx, const std::vector<PoolEntry*>& candidates,
                 const ReassignOptions& options)
        : ctx_(ctx), candidates_(candidates), options_(options) {}

    Plan run() {
        // when the full take grid is too large, fall back to all-or-nothing
        // parcels; the grid stays exhaustive on small instances
        std::int64_t combinations = 1;
        for (const PoolEntry* entry : candidates_) {
            std::int64_t ticks = (entry->remaining / ctx_.step).floor();
            combinations *= ticks + 1;
            if (combinations > 4096) {
                coarse_ = true;
                break;
            }
        }
        std::vector<Rational> takes(candidates_.size(), Rational(0));
        dfs(0, Composition{}, takes);
        return best_;
    }

private:
    const TargetContext& ctx_;
    const std::vector<PoolEntry*>& candidates_;
    const ReassignOptions& options_;
    Plan best_;
    std::int64_t states_ = 0;
    bool coarse_ = false;

    void consider(const Composition& parcels, const std::vector<Rational>& takes) {
        Plan plan;
        plan.takes = takes;
        if (!solve_reservoir(ctx_, parcels, options_.epsilon, plan)) return;
        if (!best_.valid || plan.consumption < best_.consumption ||
            (plan.consumption == best_.consumption && prefer(takes, best_.takes))) {
            best_ = plan;
        }
    }

    // tie-break: larger parcels from larger leftovers first
    static bool prefer(const std::vector<Rational>& a, const std::vector<Rational>& b) {
        return a > b;
    }

    void dfs(std::size_t idx, const Composition& parcels, std::vector<Rational>& takes) {
        if (idx == candidates_.size()) {
            consider(parcels, takes);
            return;
        }
        if (++states_ > options_.search_budget) return;

        const PoolEntry& entry = *candidates_[idx];
        Rational cap = std::min(entry.remaining, ctx_.capacity - parcels.total() - ctx_.fixed_total);
        std::int64_t max_ticks = cap < Rational(0) ? 0 : (cap / ctx_.step).floor();
        for (std::int64_t ticks = max_ticks; ticks >= 0; --ticks) {
            if (coarse_ && ticks != max_ticks && ticks != 0) continue;
            Rational take = ctx_.step * Rational(ticks);
            takes[idx] = take;
            Composition with = take.is_zero() ? parcels
                                              : parcels.mixed_with(entry.unit.scaled(take));
            dfs(idx + 1, with, takes);
        }
        takes[idx] = Rational(0);
    }
};

} // namespace

ReassignResult reassign_leftovers(const ApplicationGraph& app, const ArchitectureSpec& arch,
                                  const ReassignOptions& options) {
    ReassignResult result;
    result.app = app;
    result.consumption_before = reservoir_consumption(app);

    ApplicationGraph& g = result.app;
    auto order = topo_order(g);

    // ratio tolerance is judged against the original assignment, so drift
    // cannot compound along chains of replacements
    auto baseline = node_compositions(app);

    // One forward walk. Leftovers become available in processing order: a
    // target only draws from nodes already final, which keeps compositions
    // exact and the new edges forward. Returns true when anything changed.
    auto walk = [&]() {
        bool changed = false;
        std::vector<PoolEntry> pool;

        for (const auto& id : order) {
            OpNode& node = g.require_node(id);
            if (node.kind == OpKind::Input || node.kind == OpKind::Output) continue;

            auto comps = node_compositions(g);

            // ---- try to replace reservoir draws of this node ----
            if (node.fva && !pool.empty()) {
                TargetContext ctx;
                const FfuClass& cls = arch.require_class(node.ffu_class);
                Rational k(node.replication_factor);
                ctx.capacity = cls.mhc.amount() * k;
                ctx.step = arch.htr.amount() * k;
                ctx.rf = output_demand(g, id);
                // the hardware minimum still binds after replacement (the
                // ratio-derived mix MVR deliberately does not)
                if (!cls.mvr.is_zero()) {
                    Rational floor = cls.mvr.amount() * k;
                    if (!floor.is_multiple_of(ctx.step)) {
                        floor = ctx.step * Rational(ceil_div(floor, ctx.step));
                    }
                    ctx.rf = std::max(ctx.rf, floor);
                }

                for (const auto* e : g.in_edges(id)) {
                    Rational vol = edge_volume(g, *e);
                    const OpNode& src = g.require_node(e->from);
                    if (src.kind == OpKind::Input && !e->lof) {
                        std::string reagent = g.reagent_of(e->from);
                        ctx.reservoir[reagent] += vol;
                        ctx.reservoir_edges[reagent].push_back(e->from);
                        continue;
                    }
                    if (e->lof && e->lof_composition) {
                        ctx.fixed_total += vol;
                        ctx.fixed_comp = ctx.fixed_comp.mixed_with(*e->lof_composition);
                        continue;
                    }
                    if (vol.is_zero()) continue;
                    const Composition& src_comp = comps.at(e->from);
                    Composition parcel = src_comp.scaled(vol / src_comp.total());
                    ctx.fixed_total += vol;
                    ctx.fixed_comp = ctx.fixed_comp.mixed_with(parcel);
                }

                bool has_reservoir_draw = false;
                for (const auto& [_, v] : ctx.reservoir) {
                    if (!v.is_zero()) has_reservoir_draw = true;
                }

                const Composition& assigned_mixture = baseline.at(id);
                if (has_reservoir_draw && !assigned_mixture.total().is_zero()) {
                    ctx.shares = assigned_mixture.shares();

                    // compatible leftovers, largest first
                    std::vector<PoolEntry*> candidates;
                    for (auto& entry : pool) {
                        if (entry.remaining.is_zero()) continue;
                        bool foreign = false;
                        for (const auto& [reagent, v] : entry.unit.parts()) {
                            if (!v.is_zero() && !ctx.shares.count(reagent)) foreign = true;
                        }
                        if (!foreign) candidates.push_back(&entry);
                    }
                    std::sort(candidates.begin(), candidates.end(),
                              [](const PoolEntry* a, const PoolEntry* b) {
                                  if (a->remaining != b->remaining) return a->remaining > b->remaining;
                                  return a->source < b->source;
                              });
                    if (candidates.size() > options.max_candidates) {
                        candidates.resize(options.max_candidates);
                    }

                    if (!candidates.empty()) {
                        Plan plan = TargetSearch(ctx, candidates, options).run();
                        Rational current;
                        for (const auto& [_, v] : ctx.reservoir) current += v;
                        if (plan.valid && plan.consumption < current) {
                            // apply: rewrite reservoir FVA entries
                            for (const auto& [reagent, edges] : ctx.reservoir_edges) {
                                Rational left = plan.reservoir.count(reagent)
                                                    ? plan.reservoir.at(reagent)
                                                    : Rational(0);
                                for (const auto& input_id : edges) {
                                    Rational grant = left;
                                    (*node.fva)[input_id] = Volume(grant);
                                    left = Rational(0);
                                }
                            }
                            // attach parcels as leftover edges
                            for (std::size_t i = 0; i < candidates.size(); ++i) {
                                Rational take = plan.takes[i];
                                if (take.is_zero()) continue;
                                PoolEntry& entry = *candidates[i];
                                FlowEdge e;
                                e.from = entry.source;
                                e.to = id;
                                e.lof = true;
                                e.required_volume = Volume(take);
                                e.lof_composition = entry.unit.scaled(take);
                                g.edges.push_back(e);
                                entry.remaining -= take;
                            }
                            changed = true;
                        }
                    }
                }
            }

            // ---- publish this node's own leftover ----
            auto comps_now = node_compositions(g);
            Rational in = input_total(g, id);
            Rational out = output_demand(g, id);
            if (in > out) {
                const Composition& c = comps_now.at(id);
                Rational total = c.total();
                PoolEntry entry;
                entry.source = id;
                entry.remaining = in - out;
                entry.unit = total.is_zero() ? Composition{} : c.scaled(Rational(1) / total);
                pool.push_back(std::move(entry));
            }
        }
        return changed;
    };

    // repeat until no replacement applies; reservoir draw strictly decreases
    // with every change, so this settles quickly
    for (int pass = 0; pass < 4 && walk(); ++pass) {
    }

    result.consumption_after = reservoir_consumption(g);
    for (const auto& [reagent, before] : result.consumption_before) {
        Rational after = result.consumption_after.count(reagent)
                             ? result.consumption_after.at(reagent)
                             : Rational(0);
        if (before != after) result.savings[reagent] = before - after;
    }
    result.residual = extract_leftovers(g);
    return result;
}

ConservationAudit audit_conservation(const ApplicationGraph& app) {
    ConservationAudit audit;
    auto comps = node_compositions(app);

    for (const auto& n : app.nodes) {
        if (n.kind == OpKind::Input) {
            Rational total = output_demand(app, n.id);
            if (!total.is_zero()) audit.dispensed[app.reagent_of(n.id)] += total;
        }
        if (n.kind == OpKind::Output) {
            auto& bucket = n.waste_sink ? audit.discarded : audit.delivered;
            for (const auto& [reagent, v] : comps.at(n.id).parts()) bucket[reagent] += v;
        }
    }
    // anything still held back inside the graph counts as discarded too
    for (const auto& lof : extract_leftovers(app)) {
        for (const auto& [reagent, v] : lof.composition.parts()) {
            audit.discarded[reagent] += v;
        }
    }

    audit.balanced = true;
    std::set<std::string> reagents;
    for (const auto& [r, _] : audit.dispensed) reagents.insert(r);
    for (const auto& [r, _] : audit.delivered) reagents.insert(r);
    for (const auto& [r, _] : audit.discarded) reagents.insert(r);
    for (const auto& r : reagents) {
        Rational lhs = audit.dispensed.count(r) ? audit.dispensed.at(r) : Rational(0);
        Rational rhs = (audit.delivered.count(r) ? audit.delivered.at(r) : Rational(0)) +
                       (audit.discarded.count(r) ? audit.discarded.at(r) : Rational(0));
        if (lhs != rhs) audit.balanced = false;
    }
    return audit;
}

} // namespace mixflow
