#include "mixflow/network.hpp"

#include <bit>
#include <stdexcept>

namespace mixflow {

const std::vector<ParentPair>& NetworkGraph::pairs(const Rational& conc) const {
    auto it = parents.find(conc);
    if (it == parents.end()) throw std::out_of_range("concentration not in network: " + conc.str());
    return it->second;
}

int NetworkGraph::level_of(const Rational& conc) {
    std::uint64_t den = std::uint64_t(conc.den());
    if (!std::has_single_bit(den)) {
        throw std::domain_error("not a dyadic concentration: " + conc.str());
    }
    return std::countr_zero(den);
}

NetworkGraph build_network(int depth, bool prune_to_four) {
    if (depth < 1 || depth > 12) throw std::domain_error("network depth out of [1,12]");

    NetworkGraph net;
    net.depth = depth;
    net.pruned = prune_to_four;

    net.parents[Rational(0)] = {};
    net.parents[Rational(1)] = {};

    for (int level = 1; level <= depth; ++level) {
        std::int64_t denom = std::int64_t(1) << level;
        for (std::int64_t k = 1; k < denom; k += 2) {
            Rational v(k, denom);
            std::vector<ParentPair> pairs;
            // odd offsets keep both parents representable one level up
            std::int64_t max_m = std::min(k, denom - k);
            for (std::int64_t m = 1; m <= max_m; m += 2) {
                Rational delta(m, denom);
                pairs.push_back({v - delta, v + delta, delta});
            }
            if (prune_to_four && pairs.size() > 2) {
                // two pairs = four candidate parent vertices
                pairs.resize(2);
            }
            net.parents[v] = std::move(pairs);
        }
    }
    return net;
}

} // namespace mixflow
