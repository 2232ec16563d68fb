#pragma once

#include "mixflow/application.hpp"

#include <string>

namespace mixflow {

// Graphviz rendering of an application graph. Mixing operations come out as
// boxes labelled with their ratio and assigned volumes; leftover transfers
// are dashed.
std::string to_dot(const ApplicationGraph& app);

} // namespace mixflow
