#include "mixflow/nfb.hpp"

#include <algorithm>

namespace mixflow {

void UnitPool::take(const Rational& conc, std::int64_t n) {
    if (n == 0) return;
    auto it = units.find(conc);
    if (it == units.end() || it->second < n) {
        throw std::logic_error("pool underflow at " + conc.str());
    }
    it->second -= n;
    if (it->second == 0) units.erase(it);
}

bool UnitPool::empty() const {
    for (const auto& [_, n] : units) {
        if (n > 0) return false;
    }
    return true;
}

std::int64_t reagent_lower_bound(const ApproxRatio& target, int units_out) {
    Rational a = Rational(units_out) * target.share_a();
    Rational b = Rational(units_out) * (Rational(1) - target.share_a());
    return a.ceil() + b.ceil();
}

namespace {

struct StepKey {
    Rational conc;
    Rational lo;
    Rational hi;
    auto operator<=>(const StepKey&) const = default;
};

struct SearchState {
    std::map<Rational, std::int64_t> demands; // outstanding non-pure units
    std::map<Rational, std::int64_t> pool;    // remaining shared units
    std::map<Rational, std::int64_t> pool_taken;
    std::map<StepKey, std::int64_t> events;
    std::map<Rational, std::int64_t> waste; // intermediate, excludes root surplus
    std::int64_t pure_a = 0;
    std::int64_t pure_b = 0;
    std::int64_t surplus = 0;
};

class Search {
public:
    Search(const NetworkGraph& net, const ApproxRatio& target, int units_out,
           const SearchOptions& opts)
        : net_(net), target_conc_(target.share_a()), units_out_(units_out), opts_(opts) {}

    void run(SearchState& st) { dfs(st); }

    Rational cost_of(const SearchState& st) const {
        return opts_.weight_a * Rational(st.pure_a) + opts_.weight_b * Rational(st.pure_b);
    }

    SearchStats stats;
    bool have_best = false;
    Rational best_cost;
    std::map<std::string, MixingTree> solutions;

private:
    const NetworkGraph& net_;
    Rational target_conc_;
    int units_out_;
    SearchOptions opts_;

    // Pure content is conserved by every mixing event, so no completion can
    // cost less than the content of the outstanding demand (minus whatever the
    // pool could still cover).
    Rational lower_bound(const SearchState& st) const {
        Rational content_a, content_b;
        for (const auto& [conc, units] : st.demands) {
            std::int64_t avail = 0;
            if (auto it = st.pool.find(conc); it != st.pool.end()) avail = it->second;
            std::int64_t eff = std::max<std::int64_t>(0, units - avail);
            content_a += Rational(eff) * conc;
            content_b += Rational(eff) * (Rational(1) - conc);
        }
        Rational lb = cost_of(st);
        lb += opts_.weight_a * Rational(std::max<std::int64_t>(0, content_a.ceil()));
        lb += opts_.weight_b * Rational(std::max<std::int64_t>(0, content_b.ceil()));
        return lb;
    }

    void record_solution(const SearchState& st) {
        Rational cost = cost_of(st);
        if (!have_best || cost < best_cost) {
            have_best = true;
            best_cost = cost;
            solutions.clear();
        }
        if (cost != best_cost) return;

        MixingTree tree;
        tree.target = target_conc_;
        tree.units_out = units_out_;
        tree.leaf_units_a = st.pure_a;
        tree.leaf_units_b = st.pure_b;
        tree.pool_taken = st.pool_taken;
        tree.surplus = st.surplus;
        tree.waste = st.waste;
        for (const auto& [key, count] : st.events) {
            tree.steps.push_back(
                {key.conc, NetworkGraph::level_of(key.conc), key.lo, key.hi, int(count)});
        }
        std::sort(tree.steps.begin(), tree.steps.end(), [](const MixStep& a, const MixStep& b) {
            if (a.level != b.level) return a.level > b.level;
            if (a.conc != b.conc) return a.conc < b.conc;
            return a.parent_lo < b.parent_lo;
        });
        solutions.emplace(tree.encode(), std::move(tree));
    }

    // Consume `count` units of a parent. Pure parents drain the pool first and
    // dispense the rest; mixed parents become demand for a shallower vertex.
    // Returns the pool units used (pure parents only), needed for the undo.
    std::int64_t consume_parent(SearchState& st, const Rational& conc, std::int64_t count) {
        if (NetworkGraph::level_of(conc) == 0) {
            std::int64_t avail = 0;
            if (auto it = st.pool.find(conc); it != st.pool.end()) avail = it->second;
            std::int64_t from_pool = std::min(avail, count);
            if (from_pool > 0) {
                st.pool[conc] -= from_pool;
                st.pool_taken[conc] += from_pool;
            }
            std::int64_t fresh = count - from_pool;
            if (conc == Rational(1)) st.pure_a += fresh;
            else st.pure_b += fresh;
            return from_pool;
        }
        st.demands[conc] += count;
        return 0;
    }

    void unconsume_parent(SearchState& st, const Rational& conc, std::int64_t count,
                          std::int64_t from_pool) {
        if (NetworkGraph::level_of(conc) == 0) {
            std::int64_t fresh = count - from_pool;
            if (conc == Rational(1)) st.pure_a -= fresh;
            else st.pure_b -= fresh;
            if (from_pool > 0) {
                st.pool[conc] += from_pool;
                st.pool_taken[conc] -= from_pool;
                if (st.pool_taken[conc] == 0) st.pool_taken.erase(conc);
            }
            return;
        }
        st.demands[conc] -= count;
        if (st.demands[conc] == 0) st.demands.erase(conc);
    }

    struct Applied {
        std::int64_t lo_pool = 0;
        std::int64_t hi_pool = 0;
    };

    Applied apply_pair(SearchState& st, const Rational& vertex, const ParentPair& p,
                       std::int64_t count) {
        st.events[StepKey{vertex, p.lo, p.hi}] += count;
        Applied a;
        a.lo_pool = consume_parent(st, p.lo, count);
        a.hi_pool = consume_parent(st, p.hi, count);
        return a;
    }

    void unapply_pair(SearchState& st, const Rational& vertex, const ParentPair& p,
                      std::int64_t count, const Applied& a) {
        unconsume_parent(st, p.hi, count, a.hi_pool);
        unconsume_parent(st, p.lo, count, a.lo_pool);
        StepKey key{vertex, p.lo, p.hi};
        st.events[key] -= count;
        if (st.events[key] == 0) st.events.erase(key);
    }

    // Distribute `remaining` events of a vertex over its candidate pairs.
    // Nearest pairs get allocated first, so equal-cost solutions surface in
    // ascending-delta order.
    void assign_events(SearchState& st, const Rational& vertex,
                       const std::vector<ParentPair>& pairs, std::size_t idx,
                       std::int64_t remaining) {
        if (stats.budget_exhausted) return;
        if (idx + 1 == pairs.size()) {
            if (remaining == 0) {
                dfs(st);
                return;
            }
            Applied a = apply_pair(st, vertex, pairs[idx], remaining);
            dfs(st);
            unapply_pair(st, vertex, pairs[idx], remaining, a);
            return;
        }
        for (std::int64_t count = remaining; count >= 0; --count) {
            if (count > 0) {
                Applied a = apply_pair(st, vertex, pairs[idx], count);
                assign_events(st, vertex, pairs, idx + 1, remaining - count);
                unapply_pair(st, vertex, pairs[idx], count, a);
            } else {
                assign_events(st, vertex, pairs, idx + 1, remaining);
            }
            if (stats.budget_exhausted) return;
        }
    }

    void dfs(SearchState& st) {
        if (stats.budget_exhausted) return;
        if (++stats.expanded > opts_.budget) {
            stats.budget_exhausted = true;
            return;
        }
        if (have_best && lower_bound(st) > best_cost) return;

        if (st.demands.empty()) {
            record_solution(st);
            return;
        }

        // deepest outstanding concentration first; ties by ascending value
        auto chosen = st.demands.begin();
        int chosen_level = NetworkGraph::level_of(chosen->first);
        for (auto it = std::next(st.demands.begin()); it != st.demands.end(); ++it) {
            int level = NetworkGraph::level_of(it->first);
            if (level > chosen_level) {
                chosen = it;
                chosen_level = level;
            }
        }
        Rational vertex = chosen->first;
        std::int64_t units = chosen->second;
        st.demands.erase(chosen);

        std::int64_t avail = 0;
        if (auto it = st.pool.find(vertex); it != st.pool.end()) avail = it->second;
        std::int64_t from_pool = std::min(avail, units);
        if (from_pool > 0) {
            st.pool[vertex] -= from_pool;
            st.pool_taken[vertex] += from_pool;
        }
        std::int64_t open = units - from_pool;

        if (open == 0) {
            dfs(st);
        } else {
            std::int64_t events = (open + 1) / 2;
            std::int64_t extra = 2 * events - open;
            bool is_root = vertex == target_conc_;
            if (is_root) st.surplus += extra;
            else if (extra > 0) st.waste[vertex] += extra;

            assign_events(st, vertex, net_.pairs(vertex), 0, events);

            if (is_root) st.surplus -= extra;
            else if (extra > 0) {
                st.waste[vertex] -= extra;
                if (st.waste[vertex] == 0) st.waste.erase(vertex);
            }
        }

        if (from_pool > 0) {
            st.pool[vertex] += from_pool;
            st.pool_taken[vertex] -= from_pool;
            if (st.pool_taken[vertex] == 0) st.pool_taken.erase(vertex);
        }
        st.demands[vertex] = units;
    }
};

} // namespace

std::vector<MixingTree> nfb_search(const NetworkGraph& net, const ApproxRatio& target,
                                   int units_out, SearchMode mode, const UnitPool& pool,
                                   const SearchOptions& options, SearchStats* stats) {
    if (units_out < 1) throw std::domain_error("units_out must be positive");
    Rational conc = target.share_a();
    if (!net.has_vertex(conc)) {
        throw UnreachableError("target " + target.ratio_str() + " not representable at depth " +
                               std::to_string(net.depth));
    }
    if (mode == SearchMode::Pruned4 && !net.pruned) {
        throw std::invalid_argument("Pruned4 search needs a pruned network");
    }
    if (mode == SearchMode::Exact && net.pruned) {
        throw std::invalid_argument("Exact search needs an unpruned network");
    }

    Search search(net, target, units_out, options);
    SearchState st;
    st.pool = pool.units;
    st.demands[conc] = units_out;
    search.run(st);
    if (stats) *stats = search.stats;

    std::vector<MixingTree> out;
    out.reserve(search.solutions.size());
    for (auto& [_, tree] : search.solutions) out.push_back(std::move(tree));
    std::sort(out.begin(), out.end(), [](const MixingTree& a, const MixingTree& b) {
        if (a.op_count() != b.op_count()) return a.op_count() < b.op_count();
        return a.encode() < b.encode();
    });
    return out;
}

MixingTree nfb_best_tree(const NetworkGraph& net, const ApproxRatio& target, int units_out,
                         SearchMode mode, const UnitPool& pool, const SearchOptions& options,
                         SearchStats* stats) {
    auto all = nfb_search(net, target, units_out, mode, pool, options, stats);
    if (all.empty()) throw UnreachableError("no mixing tree found for " + target.ratio_str());
    return all.front();
}

} // namespace mixflow
