#include "mixflow/oracle.hpp"

#include <map>
#include <vector>

namespace mixflow::oracle {

namespace {

// concentration as numerator over 2^depth, holding all values on one grid
struct Grid {
    int depth;
    std::int64_t denom;
};

int level_on_grid(std::int64_t k, int depth) {
    int level = depth;
    while (level > 0 && k % 2 == 0) {
        k /= 2;
        --level;
    }
    return level;
}

// every (lo, hi) with lo + hi == 2 * k and both parents strictly shallower
// than k itself
std::vector<std::pair<std::int64_t, std::int64_t>> parent_pairs(std::int64_t k,
                                                                std::int64_t denom,
                                                                int depth) {
    int level = level_on_grid(k, depth);
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t m = 1; k - m >= 0 && k + m <= denom; ++m) {
        if (level_on_grid(k - m, depth) < level && level_on_grid(k + m, depth) < level) {
            out.push_back({k - m, k + m});
        }
    }
    return out;
}

struct Enumerator {
    Grid grid;
    std::int64_t best = -1;

    void finish(std::int64_t pure_units) {
        if (best < 0 || pure_units < best) best = pure_units;
    }

    // demands keyed by numerator on the grid; pures excluded
    void explore(std::map<std::int64_t, std::int64_t>& demands, std::int64_t pure_units) {
        if (demands.empty()) {
            finish(pure_units);
            return;
        }
        // any order works for full enumeration; deepest keeps parents unvisited
        auto chosen = demands.begin();
        int chosen_level = level_on_grid(chosen->first, grid.depth);
        for (auto it = std::next(demands.begin()); it != demands.end(); ++it) {
            int level = level_on_grid(it->first, grid.depth);
            if (level > chosen_level) {
                chosen = it;
                chosen_level = level;
            }
        }
        std::int64_t k = chosen->first;
        std::int64_t units = chosen->second;
        demands.erase(chosen);

        std::int64_t events = (units + 1) / 2;
        auto pairs = parent_pairs(k, grid.denom, grid.depth);
        assign(demands, pure_units, k, pairs, 0, events);

        demands[k] = units;
    }

    void assign(std::map<std::int64_t, std::int64_t>& demands, std::int64_t pure_units,
                std::int64_t k, const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs,
                std::size_t idx, std::int64_t remaining) {
        if (remaining == 0 || idx + 1 == pairs.size()) {
            std::int64_t count = remaining;
            pure_units += apply(demands, pairs[idx], count);
            explore(demands, pure_units);
            unapply(demands, pairs[idx], count);
            return;
        }
        for (std::int64_t count = 0; count <= remaining; ++count) {
            std::int64_t added = apply(demands, pairs[idx], count);
            assign(demands, pure_units + added, k, pairs, idx + 1, remaining - count);
            unapply(demands, pairs[idx], count);
        }
    }

    std::int64_t apply(std::map<std::int64_t, std::int64_t>& demands,
                       std::pair<std::int64_t, std::int64_t> pair, std::int64_t count) {
        std::int64_t pure = 0;
        for (std::int64_t parent : {pair.first, pair.second}) {
            if (parent == 0 || parent == grid.denom) pure += count;
            else demands[parent] += count;
        }
        return pure;
    }

    void unapply(std::map<std::int64_t, std::int64_t>& demands,
                 std::pair<std::int64_t, std::int64_t> pair, std::int64_t count) {
        for (std::int64_t parent : {pair.first, pair.second}) {
            if (parent == 0 || parent == grid.denom) continue;
            demands[parent] -= count;
            if (demands[parent] == 0) demands.erase(parent);
        }
    }
};

} // namespace

std::int64_t min_flow_cost(const ApproxRatio& target, int units_out, int depth) {
    if (depth < 1 || depth > 4) throw std::domain_error("oracle depth out of [1,4]");
    if (target.depth > depth) throw std::domain_error("target deeper than the oracle grid");

    Enumerator e;
    e.grid = {depth, std::int64_t(1) << depth};
    std::int64_t k = target.numer_a * (e.grid.denom / (target.numer_a + target.numer_b));

    std::map<std::int64_t, std::int64_t> demands;
    demands[k] = units_out;
    e.explore(demands, 0);
    return e.best;
}

} // namespace mixflow::oracle
