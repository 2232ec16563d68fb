#pragma once

#include "mixflow/application.hpp"

#include <cstdint>

namespace mixflow {

struct GeneratorOptions {
    int min_ops = 3;
    int max_ops = 10;
    int max_reagents = 3;
    bool fixed_mixers = false; // otherwise arbitrary-ratio hardware
};

struct GeneratedInstance {
    ApplicationGraph app;
    ArchitectureSpec arch;
    std::uint64_t seed = 0;
};

// Deterministic random polar DAG plus a matching architecture. Instances are
// always valid and always satisfiable: infeasible draws retry on a derived
// seed until assignment succeeds.
GeneratedInstance random_instance(std::uint64_t seed, const GeneratorOptions& options = {});

} // namespace mixflow
