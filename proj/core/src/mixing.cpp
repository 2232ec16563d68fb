#include "mixflow/mixing.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace mixflow {

ApproxRatio approximate_ratio(const Rational& share_a, int precision) {
    if (share_a <= Rational(0) || share_a >= Rational(1)) {
        throw InvalidRatioError("share must lie strictly between 0 and 1");
    }
    if (precision < 1 || precision > 30) {
        throw InvalidRatioError("precision level out of range");
    }

    ApproxRatio best;
    bool have = false;
    for (int depth = 1; depth <= precision; ++depth) {
        std::int64_t denom = std::int64_t(1) << depth;
        // odd numerators only: even ones reduce to a shallower depth already
        // visited, and the tie-break prefers the shallower form anyway
        for (std::int64_t k = 1; k < denom; k += (depth == 1 ? 1 : 2)) {
            Rational err = (Rational(k, denom) - share_a).abs();
            if (!have || err < best.error) {
                best = ApproxRatio{k, denom - k, depth, err};
                have = true;
            }
        }
    }
    return best;
}

std::int64_t MixingTree::op_count() const {
    std::int64_t ops = 0;
    for (const auto& s : steps) ops += s.count;
    return ops;
}

std::string MixingTree::encode() const {
    std::vector<MixStep> sorted = steps;
    std::sort(sorted.begin(), sorted.end(), [](const MixStep& a, const MixStep& b) {
        if (a.level != b.level) return a.level > b.level;
        if (a.conc != b.conc) return a.conc < b.conc;
        return a.parent_lo < b.parent_lo;
    });
    std::ostringstream os;
    for (const auto& s : sorted) {
        os << s.conc.str() << "<-" << s.parent_lo.str() << "+" << s.parent_hi.str()
           << "x" << s.count << ";";
    }
    for (const auto& [conc, units] : pool_taken) {
        os << "pool " << conc.str() << "x" << units << ";";
    }
    return os.str();
}

std::string MixingTree::to_dot(const std::string& reagent_a, const std::string& reagent_b) const {
    auto vertex_name = [&](const Rational& conc) -> std::string {
        if (conc == Rational(1)) return reagent_a;
        if (conc == Rational(0)) return reagent_b;
        return "c" + std::to_string(conc.num()) + "_" + std::to_string(conc.den());
    };
    std::ostringstream os;
    os << "digraph mixing_tree {\n  rankdir=BT;\n";
    os << "  " << reagent_a << " [shape=invhouse];\n";
    os << "  " << reagent_b << " [shape=invhouse];\n";
    for (const auto& s : steps) {
        os << "  " << vertex_name(s.conc) << " [shape=box, label=\"" << s.conc.str()
           << " @ L" << s.level << ", " << 2 * s.count << " units\"];\n";
    }
    for (const auto& s : steps) {
        os << "  " << vertex_name(s.parent_lo) << " -> " << vertex_name(s.conc) << ";\n";
        os << "  " << vertex_name(s.parent_hi) << " -> " << vertex_name(s.conc) << ";\n";
    }
    os << "}\n";
    return os.str();
}

MixingTree min_mix_tree(const ApproxRatio& ratio, int units_out) {
    std::int64_t a = ratio.numer_a;
    std::int64_t b = ratio.numer_b;
    std::int64_t sum = a + b;
    if (a <= 0 || b <= 0 || !std::has_single_bit(std::uint64_t(sum))) {
        throw InvalidRatioError("numerators must be positive with a power-of-two sum");
    }
    int depth = std::countr_zero(std::uint64_t(sum));
    if (depth >= 1 && (a % 2 == 0 || b % 2 == 0)) {
        throw InvalidRatioError("ratio is not reduced: numerators must be odd");
    }
    if (units_out < 1) throw InvalidRatioError("units_out must be positive");

    // Scale every step so the root (which yields two units per event) covers
    // the requested output.
    std::int64_t s = (units_out + 1) / 2;

    MixingTree tree;
    tree.target = Rational(a, sum);
    tree.units_out = units_out;

    Rational chain = Rational(1, 2);
    tree.steps.push_back({chain, 1, Rational(0), Rational(1), int(s)});
    tree.leaf_units_a += s;
    tree.leaf_units_b += s;
    for (int j = 1; j < depth; ++j) {
        bool add_a = (a >> j) & 1;
        Rational pure = add_a ? Rational(1) : Rational(0);
        Rational next = (chain + pure) * Rational(1, 2);
        tree.steps.push_back({next, j + 1, std::min(chain, pure), std::max(chain, pure), int(s)});
        if (add_a) tree.leaf_units_a += s;
        else tree.leaf_units_b += s;
        // only half of the previous step's output moves up the chain
        tree.waste[chain] += s;
        chain = next;
    }
    tree.surplus = 2 * s - units_out;

    // chain ends exactly at the reduced ratio by construction
    std::sort(tree.steps.begin(), tree.steps.end(), [](const MixStep& x, const MixStep& y) {
        if (x.level != y.level) return x.level > y.level;
        if (x.conc != y.conc) return x.conc < y.conc;
        return x.parent_lo < y.parent_lo;
    });
    return tree;
}

TreeMetrics tree_metrics(const MixingTree& tree) {
    TreeMetrics m;
    m.fluid_cost = tree.fluid_cost();
    m.op_count = tree.op_count();
    m.waste_profile = tree.waste;
    m.surplus = tree.surplus;
    return m;
}

bool tree_is_consistent(const MixingTree& tree, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };

    // available units per concentration: production + pool + pure draws
    std::map<Rational, std::int64_t> produced;
    produced[Rational(1)] += tree.leaf_units_a;
    produced[Rational(0)] += tree.leaf_units_b;
    for (const auto& [conc, units] : tree.pool_taken) produced[conc] += units;

    std::map<Rational, std::int64_t> consumed;
    for (const auto& s : tree.steps) {
        if ((s.parent_lo + s.parent_hi) * Rational(1, 2) != s.conc) {
            return fail("step output is not the average of its parents");
        }
        consumed[s.parent_lo] += s.count;
        consumed[s.parent_hi] += s.count;
        produced[s.conc] += 2 * s.count;
    }
    consumed[tree.target] += tree.units_out + tree.surplus;
    for (const auto& [conc, units] : tree.waste) consumed[conc] += units;

    for (const auto& [conc, units] : consumed) {
        if (produced[conc] != units) {
            return fail("unit conservation violated at " + conc.str());
        }
    }
    for (const auto& [conc, units] : produced) {
        if (consumed[conc] != units) {
            return fail("unconsumed production at " + conc.str());
        }
    }
    return true;
}

} // namespace mixflow
