#pragma once

#include "mixflow/mixing.hpp"

namespace mixflow::oracle {

// True minimum pure-input units for a target, by exhaustive enumeration of
// every feasible integer unit-flow DAG over the unpruned dilution network.
// Deliberately written without the search machinery it certifies; only
// practical for depth <= 3 and a few units.
std::int64_t min_flow_cost(const ApproxRatio& target, int units_out, int depth);

} // namespace mixflow::oracle
