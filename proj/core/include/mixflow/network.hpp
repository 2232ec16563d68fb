#pragma once

#include "mixflow/rational.hpp"

#include <map>
#include <vector>

namespace mixflow {

// Candidate parent pair of a network vertex: two concentrations at shallower
// levels whose average equals the vertex. delta is the half-distance.
struct ParentPair {
    Rational lo;
    Rational hi;
    Rational delta;
};

// Dilution network over concentrations k/2^level for level <= depth, with the
// pure endpoints 0 and 1 at level 0. Vertices at level l+1 reach parent pairs
// (v - delta, v + delta) only, since a 1:1 mix yields the average of its
// inputs. In pruned mode each vertex keeps pairs covering at most four parent
// vertices (the nearest concentrations first).
class NetworkGraph {
public:
    int depth = 0;
    bool pruned = false;
    // vertex concentration -> candidate pairs ordered by ascending delta,
    // then ascending lo
    std::map<Rational, std::vector<ParentPair>> parents;

    bool has_vertex(const Rational& conc) const { return parents.count(conc) > 0; }
    const std::vector<ParentPair>& pairs(const Rational& conc) const;

    static int level_of(const Rational& conc);
};

// All vertices k/2^l for l <= depth with their parent pairs. prune_to_four
// keeps only the pairs over the four nearest parent vertices per vertex.
NetworkGraph build_network(int depth, bool prune_to_four = false);

} // namespace mixflow
